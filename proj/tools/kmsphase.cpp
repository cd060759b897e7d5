// Command-line front end. Talks to the library only through kmsphase.h.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "kmsphase/kmsphase.h"

namespace {

using nlohmann::json;

constexpr int kExitPass = 0;
constexpr int kExitFail = 1;
constexpr int kExitConfig = 2;

struct Inputs {
  std::string config_path;
  std::string field;
  std::string m0;
  std::string gamma;
  std::vector<int> minf;
  std::vector<std::string> bounds;  // name=value
};

// Status to exit code; anything fixable by changing the input is a config error.
int report_status(kms_status st) {
  std::cerr << "kmsphase: " << kms_status_name(st) << ": " << kms_last_error() << "\n";
  if (st == KMS_ERR_SCAN_BOUND_TOO_SMALL) std::cerr << "kmsphase: raise bounds.scan_bound in the config\n";
  switch (st) {
    case KMS_ERR_CONFIG:
    case KMS_ERR_ARGUMENT:
    case KMS_ERR_SCAN_BOUND_TOO_SMALL:
      return kExitConfig;
    default:
      return kExitFail;
  }
}

// Config file merged with the command-line overrides; nullopt after printing
// the problem.
std::optional<std::string> build_config(const Inputs& in) {
  json doc = json::object();
  if (!in.config_path.empty()) {
    std::ifstream f(in.config_path);
    if (!f) {
      std::cerr << "kmsphase: cannot read config " << in.config_path << "\n";
      return std::nullopt;
    }
    std::stringstream ss;
    ss << f.rdbuf();
    try {
      doc = json::parse(ss.str());
    } catch (const json::parse_error& e) {
      std::cerr << "kmsphase: config is not valid JSON: " << e.what() << "\n";
      return std::nullopt;
    }
    if (!doc.is_object()) {
      std::cerr << "kmsphase: config must be a JSON object\n";
      return std::nullopt;
    }
  }
  auto parse_value = [](const std::string& s) -> std::optional<json> {
    try {
      return json::parse(s);
    } catch (const json::parse_error&) {
      return std::nullopt;
    }
  };
  if (!in.field.empty()) doc["field"] = in.field;
  if (!in.minf.empty()) doc["modulus"]["minf"] = in.minf;
  if (!in.m0.empty()) {
    auto v = parse_value(in.m0);
    if (!v) {
      std::cerr << "kmsphase: --m0 must be JSON (an integer or {\"hnf\":[a,b,c]})\n";
      return std::nullopt;
    }
    doc["modulus"]["m0"] = *v;
  }
  if (!in.gamma.empty()) {
    if (in.gamma == "trivial" || in.gamma == "full") {
      doc["gamma"] = in.gamma;
    } else {
      auto v = parse_value(in.gamma);
      if (!v) {
        std::cerr << "kmsphase: --gamma must be trivial, full or a JSON object\n";
        return std::nullopt;
      }
      doc["gamma"] = *v;
    }
  }
  for (const auto& b : in.bounds) {
    const auto eq = b.find('=');
    if (eq == std::string::npos || eq == 0) {
      std::cerr << "kmsphase: --set expects name=value, got " << b << "\n";
      return std::nullopt;
    }
    try {
      std::size_t used = 0;
      const unsigned long long v = std::stoull(b.substr(eq + 1), &used);
      if (used != b.size() - eq - 1) throw std::invalid_argument(b);
      doc["bounds"][b.substr(0, eq)] = v;
    } catch (const std::exception&) {
      std::cerr << "kmsphase: bound value must be a nonnegative integer in " << b << "\n";
      return std::nullopt;
    }
  }
  return doc.dump();
}

void print_and_free(char* out) {
  std::fwrite(out, 1, std::char_traits<char>::length(out), stdout);
  kms_free(out);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Phase diagrams of KMS states for congruence monoids of number fields"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(kms_version()));

  Inputs in;
  app.add_option("--config", in.config_path, "JSON config file");
  app.add_option("--field", in.field, "field, \"Q\" or \"Q(sqrt,d)\"");
  app.add_option("--minf", in.minf, "real embeddings in the modulus, one 0/1 flag each")->expected(1, 2);
  app.add_option("--m0", in.m0, "finite part of the modulus, JSON ideal or integer");
  app.add_option("--gamma", in.gamma, "trivial, full or {\"generators\":[...]}");
  app.add_option("--set", in.bounds, "override a bound, name=value (repeatable)");

  std::string format = "json";
  auto* analyze = app.add_subcommand("analyze", "full phase report; exit 1 if any diagnostic fails");
  analyze->add_option("--format", format, "json or text")->check(CLI::IsMember({"json", "text"}));

  auto* classes = app.add_subcommand("classes", "class table of I_m / i(K_{m,Gamma})");

  std::string cls;
  double s = 2;
  std::uint64_t bound = 0;
  auto* zeta = app.add_subcommand("zeta", "truncated partial zeta function of a class");
  zeta->add_option("--class", cls, "class index, or an ideal as [n] or [a,b,c]")->required();
  zeta->add_option("--s", s, "real exponent")->required();
  zeta->add_option("--bound", bound, "norm truncation X (default: zeta_bound)");

  int chi = 0;
  std::string mode = "series";
  auto* lfunc = app.add_subcommand("lfunc", "Hecke L-series of a class-table character");
  lfunc->add_option("--char", chi, "character index")->required();
  lfunc->add_option("--s", s, "real exponent")->required();
  lfunc->add_option("--bound", bound, "truncation (default: zeta_bound or euler_bound)");
  lfunc->add_option("--mode", mode, "series or euler")->check(CLI::IsMember({"series", "euler"}));

  std::uint64_t prime_bound_arg = 0;
  auto* primes = app.add_subcommand("primes", "prime ideals coprime to m0 with their classes");
  primes->add_option("--bound", prime_bound_arg, "norm bound")->required();

  double lambda = 0, eps = 0, pair_beta = 1;
  std::uint64_t budget = 0;
  auto* pairs = app.add_subcommand("pairs", "prime pairs with N(q)/N(p) near lambda, q in class K times p");
  pairs->add_option("--class", cls, "class index, or an ideal as [n] or [a,b,c]")->required();
  pairs->add_option("--lambda", lambda, "target ratio")->required();
  pairs->add_option("--eps", eps, "tolerance")->required();
  pairs->add_option("--beta", pair_beta, "exponent (default 1)");
  pairs->add_option("--budget", budget, "prime norm budget (default: pair_budget)");

  double beta = 2;
  int cap = 30;
  std::uint64_t mc_prime_bound = 1000, samples = 100;
  auto* mcheck = app.add_subcommand("measure-check", "checks on the truncated measure nu_beta");
  mcheck->add_option("--beta", beta, "inverse temperature, >= 0")->required();
  mcheck->add_option("--cap", cap, "valuation cap M");
  mcheck->add_option("--prime-bound", mc_prime_bound, "primes of norm up to this bound");
  mcheck->add_option("--samples", samples, "random scaling-law pairs");

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitConfig;
  }

  const auto config = build_config(in);
  if (!config) return kExitConfig;

  kms_session* session = nullptr;
  if (kms_status st = kms_session_create(config->c_str(), &session); st != KMS_OK) return report_status(st);

  char* out = nullptr;
  int all_pass = 1;
  kms_status st = KMS_OK;
  if (analyze->parsed()) {
    st = kms_analyze(session, format == "text" ? KMS_FORMAT_TEXT : KMS_FORMAT_JSON, &out, &all_pass);
  } else if (classes->parsed()) {
    st = kms_classes(session, &out);
  } else if (zeta->parsed()) {
    st = kms_zeta(session, cls.c_str(), s, bound, &out);
  } else if (lfunc->parsed()) {
    st = kms_lfunc(session, chi, s, bound, mode.c_str(), &out);
  } else if (primes->parsed()) {
    st = kms_primes(session, prime_bound_arg, &out);
  } else if (pairs->parsed()) {
    st = kms_pairs(session, cls.c_str(), lambda, eps, pair_beta, budget, &out);
    if (st == KMS_OK) all_pass = json::parse(out).at("all_verified").get<bool>() ? 1 : 0;
  } else if (mcheck->parsed()) {
    st = kms_measure_check(session, beta, cap, mc_prime_bound, samples, &out, &all_pass);
  }
  kms_session_destroy(session);
  if (st != KMS_OK) return report_status(st);
  print_and_free(out);
  return all_pass ? kExitPass : kExitFail;
}
