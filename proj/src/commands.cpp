#include "bssn/commands.hpp"

#include <cmath>
#include <cstdio>
#include <optional>
#include <set>
#include <sstream>

#include <json.hpp>

#include "bssn/analytic.hpp"
#include "bssn/constraints.hpp"
#include "bssn/harness.hpp"
#include "bssn/observables.hpp"

namespace bssn {

namespace {

using Json = nlohmann::ordered_json;

const std::vector<std::string>& conventions() {
  static const std::vector<std::string> notes{
      "modes (a, b) fundamental inputs, (A, B) second-harmonic inputs; ports (c, d, C, D) their outputs",
      "basis index ((k_a n_b + k_b) n_A + k_A) n_B + k_B",
      "quadrature X_theta = (m+ e^{i theta} + m e^{-i theta}) / 2, vacuum variance 1/4",
      "witness S(theta) = Var(X_theta) - 1/4, negative means squeezing",
      "Mandel Q = (<(dN)^2> - <N>) / <N>, null when <N> vanishes",
      "input state: coherent |x>_a |y>_b with second-harmonic vacuum, x and y real",
      "operator norms: largest singular value on the interior window (cutoff - 1 - margin per mode)",
  };
  return notes;
}

std::string fmt(double v) {
  if (!std::isfinite(v))
    return "nan";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string fmt(const std::optional<double>& v) { return v ? fmt(*v) : std::string(); }

Json opt_json(const std::optional<double>& v) { return v ? Json(*v) : Json(nullptr); }

Json dims_json(const FockDims& d) {
  const auto& c = d.cutoffs();
  return Json::array({c[0], c[1], c[2], c[3]});
}

Json fit_json(const ScalingFit& f) {
  return Json{{"slope", f.slope},
              {"intercept", f.intercept},
              {"r2", f.r2},
              {"rms_log_residual", f.rms_log_residual},
              {"identically_zero", f.identically_zero},
              {"fitted", f.fitted}};
}

// Reads keys off the user config, recording the resolved value of each and
// rejecting anything left over.
class Resolver {
public:
  explicit Resolver(const Json& in) : in_(in) {
    if (!in_.is_object())
      throw Error(Error::Kind::Parse, "config must be a JSON object");
  }

  bool has(const std::string& key) const { return in_.contains(key); }

  double number(const std::string& key, double def) {
    double v = def;
    if (auto j = take(key)) {
      if (!j->is_number())
        throw Error(Error::Kind::Parse, "'" + key + "' must be a number");
      v = j->get<double>();
    }
    if (!std::isfinite(v))
      throw Error(Error::Kind::InvalidArgument, "'" + key + "' must be finite");
    out_[key] = v;
    return v;
  }

  std::size_t count(const std::string& key, std::size_t def) {
    std::size_t v = def;
    if (auto j = take(key)) {
      if (!j->is_number_integer() || j->get<long long>() < 0)
        throw Error(Error::Kind::Parse, "'" + key + "' must be a non-negative integer");
      v = j->get<std::size_t>();
    }
    out_[key] = v;
    return v;
  }

  bool flag(const std::string& key, bool def) {
    bool v = def;
    if (auto j = take(key)) {
      if (!j->is_boolean())
        throw Error(Error::Kind::Parse, "'" + key + "' must be true or false");
      v = j->get<bool>();
    }
    out_[key] = v;
    return v;
  }

  std::string text(const std::string& key, const std::string& def) {
    std::string v = def;
    if (auto j = take(key)) {
      if (!j->is_string())
        throw Error(Error::Kind::Parse, "'" + key + "' must be a string");
      v = j->get<std::string>();
    }
    out_[key] = v;
    return v;
  }

  std::array<std::size_t, 4> quad(const std::string& key, const std::array<std::size_t, 4>& def) {
    auto v = def;
    if (auto j = take(key))
      v = parse_quad(key, *j);
    out_[key] = Json::array({v[0], v[1], v[2], v[3]});
    return v;
  }

  /// [n, n, n, n] or "auto" (nullopt).
  std::optional<FockDims> dims_or_auto(const std::string& key) {
    auto j = take(key);
    if (!j || (j->is_string() && j->get<std::string>() == "auto")) {
      out_[key] = "auto";
      return std::nullopt;
    }
    FockDims d(parse_quad(key, *j));
    out_[key] = dims_json(d);
    return d;
  }

  std::vector<double> pair(const std::string& key, const std::vector<double>& def) {
    auto v = def;
    if (auto j = take(key)) {
      if (!j->is_array() || j->size() != 2 || !(*j)[0].is_number() || !(*j)[1].is_number())
        throw Error(Error::Kind::Parse, "'" + key + "' must be [lo, hi]");
      v = {(*j)[0].get<double>(), (*j)[1].get<double>()};
    }
    out_[key] = v;
    return v;
  }

  /// A list of numbers, a "lo:hi:count" range, or a single number.
  std::vector<double> grid(const std::string& key, const std::string& def, bool geometric) {
    std::vector<double> v;
    auto j = take(key);
    if (!j) {
      v = parse_range(def, geometric);
      out_[key] = def;
    } else if (j->is_string()) {
      v = parse_range(j->get<std::string>(), geometric);
      out_[key] = *j;
    } else if (j->is_number()) {
      v = {j->get<double>()};
      out_[key] = *j;
    } else if (j->is_array() && !j->empty()) {
      for (const auto& e : *j) {
        if (!e.is_number())
          throw Error(Error::Kind::Parse, "'" + key + "' entries must be numbers");
        v.push_back(e.get<double>());
      }
      out_[key] = *j;
    } else {
      throw Error(Error::Kind::Parse, "'" + key + "' must be a number, a list or a lo:hi:count range");
    }
    for (double k : v)
      if (!std::isfinite(k) || k < 0.0)
        throw Error(Error::Kind::InvalidArgument, "'" + key + "' values must be finite and >= 0");
    return v;
  }

  /// Echo of an arbitrary value (output settings chosen by the caller).
  void passthrough(const std::string& key) {
    if (auto j = take(key))
      out_[key] = *j;
  }

  Json finish() {
    for (auto it = in_.begin(); it != in_.end(); ++it)
      if (!used_.count(it.key()))
        throw Error(Error::Kind::Parse, "unknown config key '" + it.key() + "'");
    return out_;
  }

private:
  std::optional<Json> take(const std::string& key) {
    used_.insert(key);
    if (!in_.contains(key) || in_.at(key).is_null())
      return std::nullopt;
    return in_.at(key);
  }

  static std::array<std::size_t, 4> parse_quad(const std::string& key, const Json& j) {
    if (!j.is_array() || j.size() != 4)
      throw Error(Error::Kind::Parse, "'" + key + "' must be a list of four integers");
    std::array<std::size_t, 4> v{};
    for (int i = 0; i < 4; ++i) {
      if (!j[i].is_number_integer() || j[i].get<long long>() < 0)
        throw Error(Error::Kind::Parse, "'" + key + "' must be a list of four non-negative integers");
      v[i] = j[i].get<std::size_t>();
    }
    return v;
  }

  const Json& in_;
  Json out_ = Json::object();
  std::set<std::string> used_;
};

Json envelope(const std::string& command, const Json& config) {
  return Json{{"artifact", "bssn"}, {"version", kVersion}, {"command", command}, {"config", config},
              {"conventions", conventions()}};
}

std::vector<Quantity> quantities(const std::string& name) {
  if (name == "all")
    return {Quantity::eq14, Quantity::eq15, Quantity::eq16, Quantity::eq17};
  return {parse_quantity(name)};
}

CommandOutput cmd_verify(const Json& in) {
  Resolver r(in);
  if (r.has("kappa") && r.has("kappa_grid"))
    throw Error(Error::Kind::Parse, "give either 'kappa' or 'kappa_grid', not both");
  const auto kappas = r.has("kappa") ? r.grid("kappa", "0", false) : r.grid("kappa_grid", "1e-3:1e-1:7", true);
  const double eta = r.number("eta", 0.3);
  const double theta_bs = r.number("theta_bs", 0.5);
  ResidualSuiteOptions opt;
  opt.dims = FockDims(r.quad("dims", opt.dims.cutoffs()));
  opt.margin = r.count("margin", opt.margin);
  const auto band = r.pair("slope_band", {opt.slope_band[0], opt.slope_band[1]});
  opt.slope_band = {band[0], band[1]};
  opt.r2_min = r.number("r2_min", opt.r2_min);
  r.passthrough("output");
  const Json config = r.finish();

  const ResidualReport rep = residual_suite(eta, theta_bs, kappas, opt);
  Json entries = Json::array();
  std::ostringstream csv;
  csv << "label,kappa,norm,norm_grown,slope,r2,truncation_flag,passed\n";
  for (const auto& e : rep.entries) {
    entries.push_back(Json{{"label", e.label},
                           {"norms", e.norms},
                           {"norms_grown", e.norms_grown},
                           {"fit", fit_json(e.fit)},
                           {"truncation_flag", e.truncation_flag},
                           {"passed", e.passed}});
    for (std::size_t i = 0; i < rep.kappas.size(); ++i)
      csv << e.label << ',' << fmt(rep.kappas[i]) << ',' << fmt(e.norms[i]) << ',' << fmt(e.norms_grown[i]) << ','
          << fmt(e.fit.slope) << ',' << fmt(e.fit.r2) << ',' << e.truncation_flag << ',' << e.passed << '\n';
  }
  Json report = envelope("verify", config);
  report["result"] =
      Json{{"passed", rep.passed}, {"kappas", rep.kappas}, {"failures", rep.failures}, {"entries", entries}};
  return {rep.passed, report.dump(2), csv.str()};
}

Json intermediates_json(const SolverIntermediates& s) {
  Json checks = Json::array();
  for (const auto& c : s.checks)
    checks.push_back(Json{{"relation", c.relation}, {"violation", c.violation}});
  Json z = Json::array();
  for (const auto& v : s.Z)
    z.push_back(Json::array({v.real(), v.imag()}));
  return Json{{"Z", z},
              {"R0", s.R0},
              {"phi", s.phi},
              {"X0", s.X0},
              {"Y0", s.Y0},
              {"Y", s.Y},
              {"X12", s.X12},
              {"X34", s.X34},
              {"M", s.M},
              {"R0_phase_violation", s.R0_phase_violation},
              {"M_phase_violation", s.M_phase_violation},
              {"w2_magnitude", s.w2_magnitude},
              {"checks", checks}};
}

Json unknowns_json(const UnknownVector& v) {
  Json j = Json::object();
  for (int i = 0; i < kUnknowns; ++i)
    j[unknown_labels()[i]] = v[i];
  return j;
}

CommandOutput cmd_family(const Json& in) {
  Resolver r(in);
  const double theta_bs = r.number("theta_bs", 0.5);
  const FockDims dims(r.quad("dims", {5, 5, 4, 4}));
  const std::size_t margin = r.count("margin", 2);
  ConstraintSelection sel;
  sel.energy = !r.flag("drop_energy", false);
  sel.reversibility = !r.flag("drop_reversibility", false);
  sel.commutators = !r.flag("drop_commutators", false);
  const double null_tol = r.number("null_tol", 1e-8);
  const double gap_min = r.number("gap_min", 1e3);
  const double fit_tol = r.number("fit_tol", 1e-8);
  const double kappa = r.number("kappa", 0.05);
  const double eta = r.number("eta", 0.3);
  r.passthrough("output");
  const Json config = r.finish();

  const ConstraintMatrix m = build_constraints(theta_bs, dims, margin, sel);
  const Nullspace ns = nullspace(m, null_tol, gap_min);
  const FamilyFit fit = fit_family(ns, theta_bs, fit_tol);
  const bool full = sel.commutators && sel.energy && sel.reversibility;

  Json blocks = Json::array();
  for (const auto& b : m.blocks)
    blocks.push_back(Json{{"label", b.label}, {"kind", constraint_kind_name(b.kind)}, {"rows", b.rows}});

  Json extras = Json::array();
  for (const auto& e : fit.extra_directions) {
    const SolverIntermediates s = intermediates(with_unknowns(theta_bs, e));
    extras.push_back(Json{{"unknowns", unknowns_json(e)}, {"M", s.M}, {"R0", s.R0}});
  }

  const Ansatz fam = family_coefficients({kappa, eta, theta_bs});
  Json discrepancies = Json::array();
  if (!ns.gap_ok)
    discrepancies.push_back("no clear spectral gap at the nullspace threshold");
  if (fit.family_residual > fit_tol)
    discrepancies.push_back("family vectors are not in the nullspace");
  if (full && ns.dimension != 2)
    discrepancies.push_back("full constraint system has nullspace dimension " + std::to_string(ns.dimension) +
                            ", expected 2");
  const bool passed = discrepancies.empty();

  Json report = envelope("family", config);
  report["result"] = Json{{"passed", passed},
                          {"discrepancies", discrepancies},
                          {"rows", m.matrix.rows()},
                          {"blocks", blocks},
                          {"linearity_error", m.linearity_error},
                          {"singular_values", ns.singular_values},
                          {"nullspace_dimension", ns.dimension},
                          {"gap_ratio", std::isfinite(ns.gap_ratio) ? Json(ns.gap_ratio) : Json(nullptr)},
                          {"gap_ok", ns.gap_ok},
                          {"family_residual", fit.family_residual},
                          {"span_residual", fit.span_residual},
                          {"family_spans_nullspace", fit.matches},
                          {"extra_directions", extras},
                          {"extra_dimension_free_of_M_R0", m_r0_free_dimension(fit.extra_directions, theta_bs)},
                          {"family_unknowns", unknowns_json(flatten(fam))},
                          {"family_intermediates", intermediates_json(intermediates(fam))}};

  std::ostringstream csv;
  csv << "index,singular_value,kept\n";
  const auto rank = ns.singular_values.size() - static_cast<std::size_t>(ns.dimension);
  for (std::size_t i = 0; i < ns.singular_values.size(); ++i)
    csv << i << ',' << fmt(ns.singular_values[i]) << ',' << (i < rank) << '\n';
  return {passed, report.dump(2), csv.str()};
}

std::string compare_csv_header() {
  return "quantity,branch,kappa,eta,theta_bs,theta,x,y,analytic,oracle,oracle_grown,abs_diff,rel_diff,"
         "truncation_delta,truncation_ok,singular\n";
}

CommandOutput cmd_compare(const Json& in) {
  Resolver r(in);
  const auto qs = quantities(r.text("quantity", "all"));
  CompareSpec spec;
  spec.kappas = r.grid("kappa_grid", "1e-3:3e-2:5", true);
  spec.eta = r.number("eta", spec.eta);
  spec.theta_bs = r.number("theta_bs", spec.theta_bs);
  spec.x = r.number("x", spec.x);
  spec.y = r.number("y", spec.y);
  spec.dims = r.dims_or_auto("dims");
  spec.leak_tol = r.number("leak_tol", spec.leak_tol);
  spec.sh_cutoff = r.count("sh_cutoff", spec.sh_cutoff);
  spec.include_zero = r.flag("include_zero", false);
  const bool both = r.flag("both_theta_branches", true);
  r.passthrough("output");
  const Json config = r.finish();

  Json results = Json::array();
  std::ostringstream csv;
  csv << compare_csv_header();
  bool passed = true;
  for (Quantity q : qs) {
    const CompareResult res = compare_grid(q, spec);
    auto keep = [&](const std::string& branch) { return both || branch == "nominal"; };
    Json records = Json::array();
    for (const auto& rec : res.records) {
      if (!keep(rec.branch))
        continue;
      records.push_back(Json{{"branch", rec.branch},
                             {"kappa", rec.kappa},
                             {"theta", rec.theta},
                             {"analytic", opt_json(rec.analytic)},
                             {"oracle", opt_json(rec.oracle)},
                             {"oracle_grown", opt_json(rec.oracle_grown)},
                             {"abs_diff", rec.abs_diff},
                             {"rel_diff", rec.rel_diff},
                             {"truncation_delta", rec.truncation_delta},
                             {"truncation_ok", rec.truncation_ok},
                             {"singular", rec.singular},
                             {"point_agrees", rec.point_agrees}});
      csv << quantity_name(q) << ',' << rec.branch << ',' << fmt(rec.kappa) << ',' << fmt(rec.eta) << ','
          << fmt(rec.theta_bs) << ',' << fmt(rec.theta) << ',' << fmt(rec.x) << ',' << fmt(rec.y) << ','
          << fmt(rec.analytic) << ',' << fmt(rec.oracle) << ',' << fmt(rec.oracle_grown) << ',' << fmt(rec.abs_diff)
          << ',' << fmt(rec.rel_diff) << ',' << fmt(rec.truncation_delta) << ',' << rec.truncation_ok << ','
          << rec.singular << '\n';
    }
    Json verdicts = Json::array();
    bool definite = false;
    for (const auto& v : res.verdicts) {
      if (!keep(v.branch))
        continue;
      definite = definite || v.verdict != Verdict::inconclusive;
      verdicts.push_back(Json{{"branch", v.branch},
                              {"verdict", verdict_name(v.verdict)},
                              {"claimed_order", v.claimed_order},
                              {"difference_order", v.diff_fit.slope},
                              {"analytic_fit", fit_json(v.analytic_fit)},
                              {"difference_fit", fit_json(v.diff_fit)},
                              {"oracle_fit", fit_json(v.oracle_fit)},
                              {"skipped", v.skipped},
                              {"note", v.note}});
    }
    passed = passed && definite;
    results.push_back(Json{{"quantity", quantity_name(q)},
                           {"port", port_name(quantity_port(q))},
                           {"dims", dims_json(res.dims)},
                           {"leakage", res.leakage},
                           {"leakage_ok", res.leakage_ok},
                           {"definite", definite},
                           {"verdicts", verdicts},
                           {"records", records}});
  }
  Json report = envelope("compare", config);
  report["result"] = Json{{"passed", passed}, {"kappas", spec.kappas}, {"quantities", results}};
  return {passed, report.dump(2), csv.str()};
}

CommandOutput cmd_sweep(const Json& in) {
  Resolver r(in);
  const auto qs = quantities(r.text("quantity", "all"));
  const auto kappas = r.grid("kappa", "0:0.3:31", false);
  const double eta = r.number("eta", 0.3);
  const double theta_bs = r.number("theta_bs", 0.5);
  const double x = r.number("x", 1.0);
  const double y = r.number("y", 1.0);
  r.passthrough("output");
  const Json config = r.finish();

  Json rows = Json::array();
  std::ostringstream csv;
  csv << "quantity,branch,kappa,kappa_sum,theta,value,singular,fund_squeezing,fund_subpoisson,sh_subpoisson,"
         "sh_squeezing\n";
  for (Quantity q : qs) {
    for (const auto& br : branches(q)) {
      for (double kappa : kappas) {
        const BssnParams p{kappa, eta, theta_bs};
        const auto v = analytic_value(q, br, p, x, y);
        const auto pr = analytic::predicates(kappa, eta, x, y);
        const double theta = branch_theta(q, br, p);
        rows.push_back(Json{{"quantity", quantity_name(q)},
                            {"branch", br},
                            {"kappa", kappa},
                            {"kappa_sum", kappa * (x + y)},
                            {"theta", theta},
                            {"value", opt_json(v)},
                            {"predicates",
                             {{"fund_squeezing", pr.fund_squeezing},
                              {"fund_subpoisson", pr.fund_subpoisson},
                              {"sh_subpoisson", pr.sh_subpoisson},
                              {"sh_squeezing", pr.sh_squeezing}}}});
        csv << quantity_name(q) << ',' << br << ',' << fmt(kappa) << ',' << fmt(kappa * (x + y)) << ','
            << fmt(theta) << ',' << fmt(v) << ',' << !v.has_value() << ',' << pr.fund_squeezing << ','
            << pr.fund_subpoisson << ',' << pr.sh_subpoisson << ',' << pr.sh_squeezing << '\n';
      }
    }
  }
  Json report = envelope("sweep", config);
  report["result"] = Json{{"passed", true}, {"rows", rows}};
  return {true, report.dump(2), csv.str()};
}

ObservableSpec observable_spec(Resolver& r) {
  ObservableSpec spec;
  spec.target = r.text("port", "c");
  if (spec.target.size() != 1 || std::string("cdCDabAB").find(spec.target) == std::string::npos)
    throw Error(Error::Kind::Parse, "'port' must be one of c, d, C, D, a, b, A, B");
  spec.kind = parse_observable(r.text("observable", "mean_n"));
  spec.theta = r.number("theta", 0.0);
  spec.params.kappa = r.number("kappa", 0.01);
  spec.params.eta = r.number("eta", 0.3);
  spec.params.theta_bs = r.number("theta_bs", 0.5);
  spec.params.validate();
  spec.x = r.number("x", 1.0);
  spec.y = r.number("y", 1.0);
  return spec;
}

CommandOutput cmd_truncation(const Json& in) {
  Resolver r(in);
  const ObservableSpec spec = observable_spec(r);
  const FockDims base(r.quad("dims", {10, 10, 3, 3}));
  const auto step = r.quad("cutoff_step", {2, 2, 2, 2});
  const std::size_t rungs = r.count("rungs", 3);
  r.passthrough("output");
  const Json config = r.finish();

  const TruncationReport rep = truncation_sweep(spec, base, step, rungs);
  const bool passed = rep.converged && !rep.blowup;
  Json ladder = Json::array();
  std::ostringstream csv;
  csv << "rung,n_a,n_b,n_A,n_B,value,difference\n";
  for (std::size_t i = 0; i < rep.ladder.size(); ++i) {
    ladder.push_back(Json{{"dims", dims_json(rep.ladder[i])}, {"value", opt_json(rep.values[i])}});
    const auto& c = rep.ladder[i].cutoffs();
    csv << i << ',' << c[0] << ',' << c[1] << ',' << c[2] << ',' << c[3] << ',' << fmt(rep.values[i]) << ','
        << (i > 0 && i - 1 < rep.differences.size() ? fmt(rep.differences[i - 1]) : std::string()) << '\n';
  }
  Json report = envelope("truncation", config);
  report["result"] = Json{{"passed", passed},
                          {"converged", rep.converged},
                          {"blowup", rep.blowup},
                          {"ladder", ladder},
                          {"differences", rep.differences}};
  return {passed, report.dump(2), csv.str()};
}

CommandOutput cmd_stats(const Json& in) {
  Resolver r(in);
  const std::string target = r.text("port", "c");
  BssnParams p;
  p.kappa = r.number("kappa", 0.0);
  p.eta = r.number("eta", 0.3);
  p.theta_bs = r.number("theta_bs", 0.5);
  p.validate();
  const double x = r.number("x", 1.0);
  const double y = r.number("y", 1.0);
  auto dims = r.dims_or_auto("dims");
  const double leak_tol = r.number("leak_tol", 1e-12);
  const std::size_t sh_cutoff = r.count("sh_cutoff", 5);
  const std::size_t n_theta = r.count("theta_grid", 64);
  r.passthrough("output");
  const Json config = r.finish();

  if (!dims)
    dims = oracle_dims(x, y, leak_tol, sh_cutoff);
  const auto input = coherent_product(*dims, {cplx{x, 0.0}, cplx{y, 0.0}, cplx{}, cplx{}});
  const StatsResult s = stats(input.state, bssn_output_op(p, parse_port(target), *dims), theta_grid(n_theta));

  std::ostringstream csv;
  csv << "theta,witness\n";
  for (std::size_t i = 0; i < s.thetas.size(); ++i)
    csv << fmt(s.thetas[i]) << ',' << fmt(s.witness[i]) << '\n';
  Json report = envelope("stats", config);
  report["result"] = Json{{"passed", true},
                          {"dims", dims_json(*dims)},
                          {"leakage", input.leakage},
                          {"mean_n", s.mean_n},
                          {"mean_n2", s.mean_n2},
                          {"mandel_q", opt_json(s.q)},
                          {"min_witness", s.min_witness},
                          {"argmin_theta", s.argmin_theta},
                          {"thetas", s.thetas},
                          {"witness", s.witness}};
  return {true, report.dump(2), csv.str()};
}

} // namespace

std::vector<double> parse_range(const std::string& text, bool geometric) {
  const auto c1 = text.find(':');
  const auto c2 = c1 == std::string::npos ? std::string::npos : text.find(':', c1 + 1);
  if (c1 == std::string::npos || c2 == std::string::npos)
    throw Error(Error::Kind::Parse, "range '" + text + "' must look like lo:hi:count");
  double lo = 0.0, hi = 0.0;
  long long count = 0;
  try {
    std::size_t used = 0;
    const std::string a = text.substr(0, c1), b = text.substr(c1 + 1, c2 - c1 - 1), c = text.substr(c2 + 1);
    lo = std::stod(a, &used);
    if (used != a.size())
      throw std::invalid_argument(a);
    hi = std::stod(b, &used);
    if (used != b.size())
      throw std::invalid_argument(b);
    count = std::stoll(c, &used);
    if (used != c.size())
      throw std::invalid_argument(c);
  } catch (const std::logic_error&) {
    throw Error(Error::Kind::Parse, "range '" + text + "' must look like lo:hi:count");
  }
  if (count < 1)
    throw Error(Error::Kind::Parse, "range '" + text + "' needs count >= 1");
  if (!(hi >= lo))
    throw Error(Error::Kind::InvalidArgument, "range '" + text + "' needs lo <= hi");
  const auto n = static_cast<std::size_t>(count);
  return geometric ? geometric_grid(lo, hi, n) : linear_grid(lo, hi, n);
}

CommandOutput run_command(const std::string& command, const std::string& config_json) {
  Json cfg;
  try {
    cfg = config_json.empty() ? Json::object() : Json::parse(config_json);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(Error::Kind::Parse, std::string("config is not valid JSON: ") + e.what());
  }
  try {
    if (command == "verify")
      return cmd_verify(cfg);
    if (command == "family")
      return cmd_family(cfg);
    if (command == "compare")
      return cmd_compare(cfg);
    if (command == "sweep")
      return cmd_sweep(cfg);
    if (command == "truncation")
      return cmd_truncation(cfg);
    if (command == "stats")
      return cmd_stats(cfg);
  } catch (const nlohmann::json::exception& e) {
    throw Error(Error::Kind::Parse, std::string("bad config value: ") + e.what());
  }
  throw Error(Error::Kind::InvalidArgument, "unknown command '" + command + "'");
}

} // namespace bssn
