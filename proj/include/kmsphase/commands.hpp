#pragma once

// The single-purpose subcommands, each returning a JSON document.

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "json.hpp"
#include "kmsphase/config.hpp"

namespace kms {

nlohmann::json scalar_to_json(const Scalar& v);

nlohmann::json classes_command(const Analysis& A);
nlohmann::json zeta_command(const Analysis& A, const std::string& cls, double s, std::uint64_t X);
// mode is "series" or "euler"; X = 0 takes the euler_bound / zeta_bound default.
nlohmann::json lfunc_command(const Analysis& A, int chi, double s, std::uint64_t X, const std::string& mode);
nlohmann::json primes_command(const Analysis& A, std::uint64_t bound);
nlohmann::json pairs_command(const Analysis& A, const std::string& cls, double lambda, double epsilon,
                             double beta, std::uint64_t budget);

struct MeasureCheckOptions {
  double beta = 2;
  int cap = 30;
  std::uint64_t prime_bound = 1000;
  std::uint64_t samples = 100;
  std::uint64_t seed = 1;
};
// Has a boolean "all_pass".
nlohmann::json measure_check_command(const Analysis& A, const MeasureCheckOptions& opt);

// Random elements of R_{m,Gamma}: coordinates in [-30, 30], |N| <= norm_max.
std::vector<AlgebraicInteger> sample_monoid(const Analysis& A, std::mt19937_64& rng, std::size_t count,
                                            long norm_max);

}  // namespace kms
