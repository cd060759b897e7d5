#include "kmsphase/kmsphase.h"

#include <cstdlib>
#include <cstring>
#include <new>
#include <string>

#include "kmsphase/commands.hpp"
#include "kmsphase/errors.hpp"
#include "kmsphase/report.hpp"

struct kms_session {
  kms::Analysis analysis;
};

namespace {

thread_local std::string last_error;

kms_status status_of(kms::ErrorCode c) {
  switch (c) {
    case kms::ErrorCode::Config: return KMS_ERR_CONFIG;
    case kms::ErrorCode::Domain: return KMS_ERR_DOMAIN;
    case kms::ErrorCode::NotCoprime: return KMS_ERR_NOT_COPRIME;
    case kms::ErrorCode::ScanBoundTooSmall: return KMS_ERR_SCAN_BOUND_TOO_SMALL;
    case kms::ErrorCode::OutOfTruncation: return KMS_ERR_OUT_OF_TRUNCATION;
    case kms::ErrorCode::EmptySequence: return KMS_ERR_EMPTY_SEQUENCE;
    case kms::ErrorCode::Argument: return KMS_ERR_ARGUMENT;
  }
  return KMS_ERR_INTERNAL;
}

char* copy_out(const std::string& s) {
  char* p = static_cast<char*>(std::malloc(s.size() + 1));
  if (p == nullptr) throw std::bad_alloc();
  std::memcpy(p, s.c_str(), s.size() + 1);
  return p;
}

template <class F>
kms_status guarded(F&& f) {
  try {
    last_error.clear();
    f();
    return KMS_OK;
  } catch (const kms::Error& e) {
    last_error = e.what();
    return status_of(e.code());
  } catch (const std::exception& e) {
    last_error = e.what();
    return KMS_ERR_INTERNAL;
  } catch (...) {
    last_error = "unknown failure";
    return KMS_ERR_INTERNAL;
  }
}

void need(const void* p, const char* what) {
  if (p == nullptr) kms::fail(kms::ErrorCode::Argument, std::string(what) + " must not be NULL");
}

std::string dump(const nlohmann::json& j) { return j.dump(2) + "\n"; }

}  // namespace

extern "C" {

const char* kms_version(void) { return "1.0.0"; }

const char* kms_last_error(void) { return last_error.c_str(); }

const char* kms_status_name(kms_status status) {
  switch (status) {
    case KMS_OK: return "ok";
    case KMS_ERR_CONFIG: return "config error";
    case KMS_ERR_DOMAIN: return "domain error";
    case KMS_ERR_NOT_COPRIME: return "not coprime";
    case KMS_ERR_SCAN_BOUND_TOO_SMALL: return "scan bound too small";
    case KMS_ERR_OUT_OF_TRUNCATION: return "out of truncation";
    case KMS_ERR_EMPTY_SEQUENCE: return "empty sequence";
    case KMS_ERR_ARGUMENT: return "argument error";
    case KMS_ERR_INTERNAL: return "internal error";
  }
  return "unknown status";
}

void kms_free(char* s) { std::free(s); }

kms_status kms_session_create(const char* config_json, kms_session** out) {
  return guarded([&] {
    need(out, "out");
    *out = nullptr;
    const std::string text = config_json == nullptr || *config_json == '\0' ? "{}" : config_json;
    const kms::Config cfg = kms::parse_config_text(text);
    *out = new kms_session{kms::Analysis::build(cfg)};
  });
}

void kms_session_destroy(kms_session* session) { delete session; }

kms_status kms_session_config(const kms_session* session, char** out) {
  return guarded([&] {
    need(session, "session");
    need(out, "out");
    const auto r = kms::analyze_input(session->analysis);
    *out = copy_out(dump(nlohmann::json(r)));
  });
}

kms_status kms_analyze(const kms_session* session, kms_format format, char** out, int* all_pass) {
  return guarded([&] {
    need(session, "session");
    need(out, "out");
    if (format != KMS_FORMAT_JSON && format != KMS_FORMAT_TEXT) kms::fail(kms::ErrorCode::Argument, "unknown format");
    const auto r = kms::analyze(session->analysis);
    *out = copy_out(kms::emit(r, format == KMS_FORMAT_JSON ? kms::Format::Json : kms::Format::Text));
    if (all_pass != nullptr) *all_pass = r.all_pass ? 1 : 0;
  });
}

kms_status kms_classes(const kms_session* session, char** out) {
  return guarded([&] {
    need(session, "session");
    need(out, "out");
    *out = copy_out(dump(kms::classes_command(session->analysis)));
  });
}

kms_status kms_zeta(const kms_session* session, const char* cls, double s, uint64_t bound, char** out) {
  return guarded([&] {
    need(session, "session");
    need(cls, "cls");
    need(out, "out");
    *out = copy_out(dump(kms::zeta_command(session->analysis, cls, s, bound)));
  });
}

kms_status kms_lfunc(const kms_session* session, int character, double s, uint64_t bound, const char* mode,
                     char** out) {
  return guarded([&] {
    need(session, "session");
    need(out, "out");
    *out = copy_out(dump(kms::lfunc_command(session->analysis, character, s, bound, mode ? mode : "series")));
  });
}

kms_status kms_primes(const kms_session* session, uint64_t bound, char** out) {
  return guarded([&] {
    need(session, "session");
    need(out, "out");
    *out = copy_out(dump(kms::primes_command(session->analysis, bound)));
  });
}

kms_status kms_pairs(const kms_session* session, const char* cls, double lambda, double epsilon, double beta,
                     uint64_t budget, char** out) {
  return guarded([&] {
    need(session, "session");
    need(cls, "cls");
    need(out, "out");
    *out = copy_out(dump(kms::pairs_command(session->analysis, cls, lambda, epsilon, beta, budget)));
  });
}

kms_status kms_measure_check(const kms_session* session, double beta, int cap, uint64_t prime_bound,
                             uint64_t samples, char** out, int* all_pass) {
  return guarded([&] {
    need(session, "session");
    need(out, "out");
    kms::MeasureCheckOptions opt;
    opt.beta = beta;
    opt.cap = cap;
    opt.prime_bound = prime_bound;
    opt.samples = samples;
    opt.seed = session->analysis.bound("seed");
    const auto j = kms::measure_check_command(session->analysis, opt);
    *out = copy_out(dump(j));
    if (all_pass != nullptr) *all_pass = j["all_pass"].get<bool>() ? 1 : 0;
  });
}

}  // extern "C"
