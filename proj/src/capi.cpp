#include "bssn/bssn.h"

#include <exception>
#include <new>
#include <string>

#include "bssn/commands.hpp"
#include "bssn/harness.hpp"

struct bssn_report {
  bssn::CommandOutput out;
};

namespace {

thread_local std::string g_last_error;

bssn_status fail(bssn_status s, const std::string& msg) {
  g_last_error = msg;
  return s;
}

bssn_status from_kind(bssn::Error::Kind k) {
  switch (k) {
  case bssn::Error::Kind::Parse: return BSSN_ERR_PARSE;
  case bssn::Error::Kind::InvalidArgument: return BSSN_ERR_INVALID_ARGUMENT;
  case bssn::Error::Kind::DimensionMismatch: return BSSN_ERR_DIMENSION;
  case bssn::Error::Kind::Numeric: return BSSN_ERR_NUMERIC;
  }
  return BSSN_ERR_INTERNAL;
}

template <class F>
bssn_status guarded(F&& f) {
  try {
    g_last_error.clear();
    return f();
  } catch (const bssn::Error& e) {
    return fail(from_kind(e.kind()), e.what());
  } catch (const std::bad_alloc&) {
    return fail(BSSN_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(BSSN_ERR_INTERNAL, e.what());
  } catch (...) {
    return fail(BSSN_ERR_INTERNAL, "unknown error");
  }
}

bssn_status put(const std::optional<double>& v, double* out) {
  if (!v)
    return fail(BSSN_ERR_UNDEFINED, "value undefined at this point");
  *out = *v;
  return BSSN_OK;
}

} // namespace

extern "C" {

const char* bssn_version(void) { return bssn::kVersion; }

const char* bssn_status_name(bssn_status status) {
  switch (status) {
  case BSSN_OK: return "ok";
  case BSSN_ERR_NULL_POINTER: return "null pointer";
  case BSSN_ERR_PARSE: return "parse error";
  case BSSN_ERR_INVALID_ARGUMENT: return "invalid argument";
  case BSSN_ERR_DIMENSION: return "dimension mismatch";
  case BSSN_ERR_NUMERIC: return "numeric failure";
  case BSSN_ERR_UNDEFINED: return "undefined";
  case BSSN_ERR_INTERNAL: return "internal error";
  }
  return "unknown status";
}

const char* bssn_last_error(void) { return g_last_error.c_str(); }

bssn_status bssn_run(const char* command, const char* config_json, bssn_report** out) {
  if (!command || !out)
    return fail(BSSN_ERR_NULL_POINTER, "command and out must not be NULL");
  *out = nullptr;
  return guarded([&] {
    auto* rep = new bssn_report{bssn::run_command(command, config_json ? config_json : "")};
    *out = rep;
    return BSSN_OK;
  });
}

int bssn_report_passed(const bssn_report* report) { return report && report->out.passed ? 1 : 0; }

const char* bssn_report_json(const bssn_report* report) { return report ? report->out.json.c_str() : nullptr; }

const char* bssn_report_csv(const bssn_report* report) { return report ? report->out.csv.c_str() : nullptr; }

void bssn_report_free(bssn_report* report) { delete report; }

bssn_status bssn_analytic(const char* quantity, const char* branch, double kappa, double eta, double theta_bs,
                          double x, double y, double* out) {
  if (!quantity || !out)
    return fail(BSSN_ERR_NULL_POINTER, "quantity and out must not be NULL");
  return guarded([&] {
    const bssn::BssnParams p{kappa, eta, theta_bs};
    p.validate();
    return put(bssn::analytic_value(bssn::parse_quantity(quantity), branch ? branch : "nominal", p, x, y), out);
  });
}

bssn_status bssn_oracle(const char* quantity, const char* branch, double kappa, double eta, double theta_bs,
                        double x, double y, const size_t dims[4], double* out) {
  if (!quantity || !dims || !out)
    return fail(BSSN_ERR_NULL_POINTER, "quantity, dims and out must not be NULL");
  return guarded([&] {
    const bssn::BssnParams p{kappa, eta, theta_bs};
    p.validate();
    const bssn::FockDims d(dims[0], dims[1], dims[2], dims[3]);
    return put(bssn::oracle_value(bssn::parse_quantity(quantity), branch ? branch : "nominal", p, x, y, d), out);
  });
}

} // extern "C"
