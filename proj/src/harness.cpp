#include "bssn/harness.hpp"

#include <algorithm>
#include <cmath>

#include "bssn/analytic.hpp"
#include "bssn/constraints.hpp"
#include "bssn/observables.hpp"

namespace bssn {

namespace {

constexpr std::array<const char*, 4> kReverseLabels{"reverse:a", "reverse:b", "reverse:A", "reverse:B"};

double rel_tol_ok(double delta, double value) { return delta < 1e-8 * (1.0 + std::abs(value)); }

QOperator target_operator(const ObservableSpec& spec, const FockDims& dims) {
  for (auto m : kModes)
    if (spec.target == mode_name(m))
      return ladder(dims, m, Ladder::annihilate);
  return bssn_output_op(spec.params, parse_port(spec.target), dims);
}

} // namespace

ScalingFit fit_power_law(const std::vector<double>& kappas, const std::vector<double>& values) {
  if (kappas.size() != values.size())
    throw Error(Error::Kind::InvalidArgument, "scaling fit needs one value per kappa");
  ScalingFit fit;
  fit.kappas = kappas;
  fit.values = values;
  fit.identically_zero = std::all_of(values.begin(), values.end(), [](double v) { return std::abs(v) <= kZeroFloor; });

  std::vector<double> lx, ly;
  for (std::size_t i = 0; i < kappas.size(); ++i) {
    if (kappas[i] > 0.0 && std::abs(values[i]) > kZeroFloor) {
      lx.push_back(std::log(kappas[i]));
      ly.push_back(std::log(std::abs(values[i])));
    }
  }
  if (lx.size() < 2)
    return fit;

  const auto n = static_cast<double>(lx.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    mx += lx[i];
    my += ly[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    sxx += (lx[i] - mx) * (lx[i] - mx);
    sxy += (lx[i] - mx) * (ly[i] - my);
    syy += (ly[i] - my) * (ly[i] - my);
  }
  if (sxx <= 0.0)
    return fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  double ss_res = 0.0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    const double r = ly[i] - (fit.intercept + fit.slope * lx[i]);
    ss_res += r * r;
  }
  fit.rms_log_residual = std::sqrt(ss_res / n);
  // A flat series fitted exactly has nothing left to explain.
  fit.r2 = syy > 0.0 ? 1.0 - ss_res / syy : 1.0;
  fit.fitted = true;
  return fit;
}

std::vector<double> geometric_grid(double lo, double hi, std::size_t count) {
  if (count == 0)
    throw Error(Error::Kind::InvalidArgument, "grid needs at least one point");
  if (count == 1)
    return {lo};
  if (!(lo > 0.0) || !(hi > 0.0))
    throw Error(Error::Kind::InvalidArgument, "geometric grid needs positive bounds");
  std::vector<double> out(count);
  const double step = std::log(hi / lo) / static_cast<double>(count - 1);
  for (std::size_t i = 0; i < count; ++i)
    out[i] = lo * std::exp(step * static_cast<double>(i));
  out.back() = hi;
  return out;
}

std::vector<double> linear_grid(double lo, double hi, std::size_t count) {
  if (count == 0)
    throw Error(Error::Kind::InvalidArgument, "grid needs at least one point");
  if (count == 1)
    return {lo};
  std::vector<double> out(count);
  for (std::size_t i = 0; i < count; ++i)
    out[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(count - 1);
  out.back() = hi;
  return out;
}

std::vector<std::pair<std::string, QOperator>> family_residuals(const BssnParams& p, const FockDims& dims) {
  const ModeOps x = annihilators(dims);
  const OutputOps out = bssn_outputs(p, dims);
  std::vector<std::pair<std::string, QOperator>> res;
  for (const auto& spec : commutator_specs())
    res.emplace_back(spec.label, full_commutator(out, spec, dims));
  res.emplace_back("energy", full_energy(out, x));

  // Reversed map applied to the forward outputs should return the inputs.
  const Ansatz rev = reversal_substitute(family_coefficients(p));
  const OutputOps back = map_ops(rev, out.as_mode_ops());
  for (int k = 0; k < 4; ++k)
    res.emplace_back(kReverseLabels[k], back.ops[k] - x.ops[k]);
  return res;
}

ResidualReport residual_suite(double eta, double theta_bs, const std::vector<double>& kappas,
                              const ResidualSuiteOptions& opt) {
  if (opt.margin < 2)
    throw Error(Error::Kind::InvalidArgument, "residual suite needs margin >= 2");
  if (kappas.empty())
    throw Error(Error::Kind::InvalidArgument, "residual suite needs at least one kappa");
  ResidualReport rep;
  rep.eta = eta;
  rep.theta_bs = theta_bs;
  rep.kappas = kappas;
  rep.options = opt;

  const Window window = interior_window(opt.dims, opt.margin);
  const FockDims grown = opt.dims.grown(2);
  const auto basis = window.indices(opt.dims);
  const auto basis_grown = window.indices(grown);

  for (double kappa : kappas) {
    const BssnParams p{kappa, eta, theta_bs};
    const auto base = family_residuals(p, opt.dims);
    const auto big = family_residuals(p, grown);
    if (rep.entries.empty())
      for (const auto& [label, op] : base)
        rep.entries.push_back({label, {}, {}, {}, false, false});
    for (std::size_t i = 0; i < base.size(); ++i) {
      rep.entries[i].norms.push_back(window_norm(base[i].second, basis));
      rep.entries[i].norms_grown.push_back(window_norm(big[i].second, basis_grown));
    }
  }

  const bool any_positive = std::any_of(kappas.begin(), kappas.end(), [](double k) { return k > 0.0; });
  for (auto& e : rep.entries) {
    e.fit = fit_power_law(kappas, e.norms);
    for (std::size_t i = 0; i < e.norms.size(); ++i) {
      const double ref = std::max(e.norms[i], kZeroFloor);
      if (std::abs(e.norms_grown[i] - e.norms[i]) > 0.1 * ref)
        e.truncation_flag = true;
    }
    if (!any_positive) {
      e.passed = e.fit.identically_zero;
    } else if (e.fit.identically_zero) {
      e.passed = true;
    } else {
      e.passed = e.fit.fitted && e.fit.slope >= opt.slope_band[0] && e.fit.slope <= opt.slope_band[1] &&
                 e.fit.r2 >= opt.r2_min;
    }
    if (e.truncation_flag) {
      e.passed = false;
      rep.failures.push_back(e.label + ": truncation-dominated residual");
    } else if (!e.passed) {
      rep.failures.push_back(e.label + ": slope " + std::to_string(e.fit.slope) + ", R2 " + std::to_string(e.fit.r2));
    }
  }
  rep.passed = rep.failures.empty();
  return rep;
}

const char* quantity_name(Quantity q) noexcept {
  switch (q) {
  case Quantity::eq14: return "eq14";
  case Quantity::eq15: return "eq15";
  case Quantity::eq16: return "eq16";
  case Quantity::eq17: return "eq17";
  }
  return "?";
}

Quantity parse_quantity(const std::string& name) {
  for (auto q : {Quantity::eq14, Quantity::eq15, Quantity::eq16, Quantity::eq17})
    if (name == quantity_name(q))
      return q;
  throw Error(Error::Kind::Parse, "unknown quantity '" + name + "' (expected eq14, eq15, eq16 or eq17)");
}

Port quantity_port(Quantity q) noexcept {
  return (q == Quantity::eq14 || q == Quantity::eq15) ? Port::c : Port::C;
}

const char* verdict_name(Verdict v) noexcept {
  switch (v) {
  case Verdict::match: return "MATCH";
  case Verdict::mismatch: return "MISMATCH";
  case Verdict::inconclusive: return "INCONCLUSIVE";
  }
  return "?";
}

std::vector<std::string> branches(Quantity q) {
  if (q == Quantity::eq14)
    return {"nominal", "shifted"};
  return {"nominal"};
}

double branch_theta(Quantity q, const std::string& branch, const BssnParams& p) {
  switch (q) {
  case Quantity::eq14: return analytic::s_fund_theta(p.eta, p.theta_bs, branch == "shifted");
  case Quantity::eq17: return analytic::s_sh_theta(p.theta_bs);
  default: return 0.0;
  }
}

std::optional<double> analytic_value(Quantity q, const std::string& branch, const BssnParams& p, double x, double y) {
  switch (q) {
  case Quantity::eq14:
    return analytic::s_fund(p.kappa, p.eta, p.theta_bs, branch_theta(q, branch, p), x, y);
  case Quantity::eq15: return analytic::q_fund(p.kappa, x, y);
  case Quantity::eq16: return analytic::q_sh(p.kappa, p.eta, x, y);
  case Quantity::eq17: return analytic::s_sh(p.kappa, p.eta, x, y);
  }
  return std::nullopt;
}

std::optional<double> oracle_value(Quantity q, const std::string& branch, const BssnParams& p, double x, double y,
                                   const FockDims& dims) {
  const QState input = coherent_product(dims, {cplx{x, 0.0}, cplx{y, 0.0}, cplx{}, cplx{}}).state;
  const QOperator m = bssn_output_op(p, quantity_port(q), dims);
  switch (q) {
  case Quantity::eq14:
  case Quantity::eq17: return squeeze_witness(input, m, branch_theta(q, branch, p));
  case Quantity::eq15:
  case Quantity::eq16: return mandel_q(input, m);
  }
  return std::nullopt;
}

FockDims oracle_dims(double x, double y, double leak_tol, std::size_t sh_cutoff) {
  const double mean = std::max(x * x, y * y);
  std::size_t n = 10;
  while (poisson_tail(mean, n) >= leak_tol) {
    ++n;
    if (n > 400)
      throw Error(Error::Kind::InvalidArgument, "amplitude too large for the leakage tolerance");
  }
  return FockDims(n, n, sh_cutoff, sh_cutoff);
}

CompareResult compare_grid(Quantity q, const CompareSpec& spec) {
  if (spec.kappas.empty())
    throw Error(Error::Kind::InvalidArgument, "comparison needs a kappa grid");
  if (spec.x < 0.0 || spec.y < 0.0 || !std::isfinite(spec.x) || !std::isfinite(spec.y))
    throw Error(Error::Kind::InvalidArgument, "amplitudes x, y must be finite and >= 0");
  const FockDims dims = spec.dims ? *spec.dims : oracle_dims(spec.x, spec.y, spec.leak_tol, spec.sh_cutoff);
  const FockDims grown = dims.grown(2);
  const double leakage =
      coherent_product(dims, {cplx{spec.x, 0.0}, cplx{spec.y, 0.0}, cplx{}, cplx{}}).leakage;
  CompareResult res{dims, leakage, leakage < spec.leak_tol, {}, {}};

  std::vector<double> kappas = spec.kappas;
  if (spec.include_zero && std::find(kappas.begin(), kappas.end(), 0.0) == kappas.end())
    kappas.insert(kappas.begin(), 0.0);

  for (const auto& br : branches(q)) {
    QuantityVerdict v{q, br, Verdict::inconclusive, 0, {}, {}, {}, 0, {}};
    std::vector<double> ks, an, df, orc;
    for (double kappa : kappas) {
      const BssnParams p{kappa, spec.eta, spec.theta_bs};
      ComparisonRecord rec{q, br, kappa, spec.eta, spec.theta_bs, branch_theta(q, br, p), spec.x, spec.y,
                           analytic_value(q, br, p, spec.x, spec.y), oracle_value(q, br, p, spec.x, spec.y, dims),
                           oracle_value(q, br, p, spec.x, spec.y, grown)};
      rec.singular = !rec.analytic || !rec.oracle;
      if (!rec.singular) {
        rec.abs_diff = std::abs(*rec.analytic - *rec.oracle);
        rec.rel_diff = rec.abs_diff / std::max(std::abs(*rec.analytic), 1e-300);
        rec.point_agrees = rec.abs_diff <= 1e-8 * (1.0 + std::abs(*rec.analytic));
      }
      if (rec.oracle && rec.oracle_grown) {
        rec.truncation_delta = std::abs(*rec.oracle_grown - *rec.oracle);
        rec.truncation_ok = rel_tol_ok(rec.truncation_delta, *rec.oracle);
      } else {
        rec.truncation_ok = rec.oracle.has_value() == rec.oracle_grown.has_value();
      }
      if (kappa > 0.0) {
        if (rec.singular) {
          ++v.skipped;
        } else {
          ks.push_back(kappa);
          an.push_back(*rec.analytic);
          df.push_back(*rec.analytic - *rec.oracle);
          orc.push_back(*rec.oracle);
        }
      }
      res.records.push_back(rec);
    }

    v.analytic_fit = fit_power_law(ks, an);
    v.diff_fit = fit_power_law(ks, df);
    v.oracle_fit = fit_power_law(ks, orc);
    auto good = [](const ScalingFit& f) { return f.fitted && (f.r2 >= 0.95 || f.rms_log_residual <= 0.05); };

    if (ks.size() < 3) {
      v.note = "fewer than three non-singular grid points";
    } else if (v.diff_fit.identically_zero) {
      v.verdict = Verdict::match;
      v.note = "closed form and oracle agree at every point";
    } else if (v.analytic_fit.identically_zero) {
      // Nothing to vanish relative to: any clean nonzero oracle signal disagrees.
      if (good(v.diff_fit)) {
        v.verdict = Verdict::mismatch;
        v.note = "closed form vanishes while the oracle does not";
      } else {
        v.note = "closed form vanishes and the oracle has no clean kappa-order";
      }
    } else if (!good(v.analytic_fit)) {
      v.note = "closed form has no clean leading kappa-order on this grid";
    } else {
      v.claimed_order = static_cast<int>(std::lround(v.analytic_fit.slope));
      if (!good(v.diff_fit)) {
        v.note = "difference has no clean kappa-order";
      } else if (v.diff_fit.slope >= v.claimed_order + 0.75) {
        v.verdict = Verdict::match;
        v.note = "difference vanishes faster than the closed form";
      } else if (v.diff_fit.slope <= v.claimed_order + 0.25) {
        v.verdict = Verdict::mismatch;
        v.note = "difference is of the same kappa-order as the closed form";
      } else {
        v.note = "difference order between claimed and claimed + 1";
      }
    }
    res.verdicts.push_back(std::move(v));
  }
  return res;
}

ObservableKind parse_observable(const std::string& name) {
  if (name == "mean_n")
    return ObservableKind::mean_n;
  if (name == "mandel_q")
    return ObservableKind::mandel_q;
  if (name == "witness")
    return ObservableKind::witness;
  throw Error(Error::Kind::Parse, "unknown observable '" + name + "' (expected mean_n, mandel_q or witness)");
}

const char* observable_name(ObservableKind k) noexcept {
  switch (k) {
  case ObservableKind::mean_n: return "mean_n";
  case ObservableKind::mandel_q: return "mandel_q";
  case ObservableKind::witness: return "witness";
  }
  return "?";
}

std::optional<double> evaluate_observable(const ObservableSpec& spec, const FockDims& dims) {
  const QState input = coherent_product(dims, {cplx{spec.x, 0.0}, cplx{spec.y, 0.0}, cplx{}, cplx{}}).state;
  const QOperator m = target_operator(spec, dims);
  switch (spec.kind) {
  case ObservableKind::mean_n: return m.apply(input).squaredNorm();
  case ObservableKind::mandel_q: return mandel_q(input, m);
  case ObservableKind::witness: return squeeze_witness(input, m, spec.theta);
  }
  return std::nullopt;
}

TruncationReport truncation_sweep(const ObservableSpec& spec, const FockDims& base,
                                  const std::array<std::size_t, 4>& step, std::size_t rungs) {
  if (rungs < 2)
    throw Error(Error::Kind::InvalidArgument, "truncation sweep needs at least two rungs");
  TruncationReport rep;
  for (std::size_t r = 0; r < rungs; ++r) {
    auto c = base.cutoffs();
    for (int m = 0; m < 4; ++m)
      c[m] += r * step[m];
    rep.ladder.emplace_back(c);
    rep.values.push_back(evaluate_observable(spec, rep.ladder.back()));
  }
  bool defined = std::all_of(rep.values.begin(), rep.values.end(), [](const auto& v) { return v.has_value(); });
  bool all_undefined = std::none_of(rep.values.begin(), rep.values.end(), [](const auto& v) { return v.has_value(); });
  if (all_undefined) {
    rep.converged = true;
    return rep;
  }
  if (!defined)
    return rep;
  for (std::size_t i = 0; i + 1 < rep.values.size(); ++i)
    rep.differences.push_back(std::abs(*rep.values[i + 1] - *rep.values[i]));
  const double last = *rep.values.back();
  rep.converged = rel_tol_ok(rep.differences.back(), last);
  for (std::size_t i = 0; i + 1 < rep.differences.size(); ++i)
    if (rep.differences[i + 1] > rep.differences[i] && !rel_tol_ok(rep.differences[i + 1], last))
      rep.blowup = true;
  return rep;
}

} // namespace bssn
