// bssn: command-line front end over the C API.
//
// Exit codes: 0 pass, 1 verification failure, 2 usage or config error.

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "bssn/bssn.h"

namespace {

using Json = nlohmann::ordered_json;

constexpr int kExitPass = 0;
constexpr int kExitFail = 1;
constexpr int kExitUsage = 2;

// Flag values as given on the command line; only set ones reach the config.
struct Flags {
  std::map<std::string, double> numbers;
  std::map<std::string, std::string> texts;
  std::map<std::string, bool> switches;
  std::map<std::string, std::vector<std::size_t>> quads;
  std::string config_path;
  std::string out_dir;
  std::string format = "json";
  bool print = false;
};

void add_number(CLI::App* app, Flags& f, const std::string& flag, const std::string& key, const std::string& help) {
  app->add_option_function<double>(flag, [&f, key](double v) { f.numbers[key] = v; }, help);
}

void add_text(CLI::App* app, Flags& f, const std::string& flag, const std::string& key, const std::string& help) {
  app->add_option_function<std::string>(flag, [&f, key](const std::string& v) { f.texts[key] = v; }, help);
}

void add_switch(CLI::App* app, Flags& f, const std::string& flag, const std::string& key, const std::string& help) {
  app->add_flag_function(flag, [&f, key](std::int64_t) { f.switches[key] = true; }, help);
}

void add_quad(CLI::App* app, Flags& f, const std::string& flag, const std::string& key, const std::string& help) {
  app->add_option_function<std::vector<std::size_t>>(
         flag, [&f, key](const std::vector<std::size_t>& v) { f.quads[key] = v; }, help)
      ->expected(4);
}

void add_common(CLI::App* app, Flags& f) {
  app->add_option("--config", f.config_path, "JSON config file; its keys override flags");
  app->add_option("--out-dir", f.out_dir, "output directory (default $BSSN_OUT_DIR, else .)");
  app->add_option("--format", f.format, "report file format")->check(CLI::IsMember({"json", "csv"}));
  app->add_flag("--print", f.print, "also write the report to stdout");
  add_number(app, f, "--eta", "eta", "material phase eta");
  add_number(app, f, "--theta-bs", "theta_bs", "second-harmonic splitting angle");
}

void add_amplitudes(CLI::App* app, Flags& f) {
  add_number(app, f, "--x", "x", "coherent amplitude of mode a");
  add_number(app, f, "--y", "y", "coherent amplitude of mode b");
}

// "--kappa 0.01" becomes a number, "--kappa 0:0.3:31" stays a range string.
Json kappa_value(const std::string& text) {
  try {
    std::size_t used = 0;
    const double v = std::stod(text, &used);
    if (used == text.size())
      return v;
  } catch (const std::logic_error&) {
  }
  return text;
}

Json build_config(const Flags& f) {
  Json cfg = Json::object();
  for (const auto& [k, v] : f.numbers)
    cfg[k] = v;
  for (const auto& [k, v] : f.texts)
    cfg[k] = k == "kappa" ? kappa_value(v) : Json(v);
  for (const auto& [k, v] : f.switches)
    cfg[k] = v;
  for (const auto& [k, v] : f.quads)
    cfg[k] = v;
  if (!f.config_path.empty()) {
    std::ifstream in(f.config_path);
    if (!in)
      throw std::runtime_error("cannot read config file " + f.config_path);
    Json file;
    try {
      file = Json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
      throw std::runtime_error(f.config_path + ": " + e.what());
    }
    if (!file.is_object())
      throw std::runtime_error(f.config_path + ": config must be a JSON object");
    for (auto it = file.begin(); it != file.end(); ++it)
      cfg[it.key()] = it.value();
  }
  return cfg;
}

std::string out_dir(const Flags& f) {
  if (!f.out_dir.empty())
    return f.out_dir;
  if (const char* env = std::getenv("BSSN_OUT_DIR"); env && *env)
    return env;
  return ".";
}

void summarize(const std::string& command, const Json& report) {
  const Json& res = report.at("result");
  if (command == "compare") {
    for (const auto& q : res.at("quantities"))
      for (const auto& v : q.at("verdicts"))
        std::printf("%s %-8s %-12s claimed order %d, difference order %.3f\n", q.at("quantity").get<std::string>().c_str(),
                    v.at("branch").get<std::string>().c_str(), v.at("verdict").get<std::string>().c_str(),
                    v.at("claimed_order").get<int>(), v.at("difference_order").get<double>());
  } else if (command == "family") {
    std::printf("nullspace dimension %d, family residual %.3g\n", res.at("nullspace_dimension").get<int>(),
                res.at("family_residual").get<double>());
    for (const auto& d : res.at("discrepancies"))
      std::printf("discrepancy: %s\n", d.get<std::string>().c_str());
  } else if (command == "verify") {
    for (const auto& f : res.at("failures"))
      std::printf("failure: %s\n", f.get<std::string>().c_str());
  }
  std::printf("%s: %s\n", command.c_str(), res.at("passed").get<bool>() ? "pass" : "fail");
}

int run(const std::string& command, const Flags& f) {
  Json cfg;
  try {
    cfg = build_config(f);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "bssn: %s\n", e.what());
    return kExitUsage;
  }
  const std::string dir = out_dir(f);
  cfg["output"] = Json{{"dir", dir}, {"format", f.format}};

  bssn_report* rep = nullptr;
  const bssn_status st = bssn_run(command.c_str(), cfg.dump().c_str(), &rep);
  if (st != BSSN_OK) {
    std::fprintf(stderr, "bssn %s: %s: %s\n", command.c_str(), bssn_status_name(st), bssn_last_error());
    return (st == BSSN_ERR_PARSE || st == BSSN_ERR_INVALID_ARGUMENT) ? kExitUsage : kExitFail;
  }
  const bool passed = bssn_report_passed(rep) != 0;
  const std::string body = f.format == "csv" ? bssn_report_csv(rep) : bssn_report_json(rep);
  const Json report = Json::parse(bssn_report_json(rep));
  bssn_report_free(rep);

  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  const auto path = std::filesystem::path(dir) / (command + "." + f.format);
  std::ofstream out(path, std::ios::binary);
  if (!out || !(out << body << (f.format == "json" ? "\n" : ""))) {
    std::fprintf(stderr, "bssn: cannot write %s\n", path.string().c_str());
    return kExitUsage;
  }
  out.close();

  if (f.print)
    std::cout << body << (f.format == "json" ? "\n" : "");
  summarize(command, report);
  std::printf("report: %s\n", path.string().c_str());
  return passed ? kExitPass : kExitFail;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"Numerical laboratory for the second-order-nonlinear beam splitter"};
  app.set_version_flag("--version", std::string(bssn_version()));
  app.require_subcommand(1);

  Flags f;

  auto* verify = app.add_subcommand("verify", "residual suite of the reduced map with kappa-scaling fits");
  add_common(verify, f);
  add_text(verify, f, "--kappa", "kappa", "single kappa or lo:hi:count (linear)");
  add_text(verify, f, "--kappa-grid", "kappa_grid", "lo:hi:count, geometric");
  add_quad(verify, f, "--dims", "dims", "cutoffs n_a n_b n_A n_B");
  add_number(verify, f, "--r2-min", "r2_min", "minimum R^2 of each fit");

  auto* family = app.add_subcommand("family", "re-derive the coupling coefficients from the constraints");
  add_common(family, f);
  add_quad(family, f, "--dims", "dims", "cutoffs n_a n_b n_A n_B");
  add_switch(family, f, "--drop-energy", "drop_energy", "leave out the energy constraint");
  add_switch(family, f, "--drop-reversibility", "drop_reversibility", "leave out the reversibility constraints");
  add_number(family, f, "--null-tol", "null_tol", "relative singular-value threshold");
  add_number(family, f, "--kappa", "kappa", "kappa of the reference family point");

  auto* compare = app.add_subcommand("compare", "closed forms against the Fock-space oracle");
  add_common(compare, f);
  add_amplitudes(compare, f);
  add_text(compare, f, "--quantity", "quantity", "eq14, eq15, eq16, eq17 or all");
  add_text(compare, f, "--kappa-grid", "kappa_grid", "lo:hi:count, geometric");
  add_quad(compare, f, "--dims", "dims", "oracle cutoffs (default: from the leakage tolerance)");
  add_number(compare, f, "--leak-tol", "leak_tol", "coherent-state leakage tolerance");
  add_switch(compare, f, "--both-theta-branches", "both_theta_branches", "report both eq14 branches (default)");
  add_switch(compare, f, "--include-zero", "include_zero", "add a kappa = 0 record");

  auto* sweep = app.add_subcommand("sweep", "closed-form tables for plotting");
  add_common(sweep, f);
  add_amplitudes(sweep, f);
  add_text(sweep, f, "--quantity", "quantity", "eq14, eq15, eq16, eq17 or all");
  add_text(sweep, f, "--kappa", "kappa", "lo:hi:count (linear) or a single value");

  auto* trunc = app.add_subcommand("truncation", "convergence of one observable under growing cutoffs");
  add_common(trunc, f);
  add_amplitudes(trunc, f);
  add_text(trunc, f, "--port", "port", "c, d, C, D or input mode a, b, A, B");
  add_text(trunc, f, "--observable", "observable", "mean_n, mandel_q or witness");
  add_number(trunc, f, "--theta", "theta", "quadrature angle for the witness");
  add_number(trunc, f, "--kappa", "kappa", "coupling strength");
  add_quad(trunc, f, "--dims", "dims", "first rung cutoffs");
  add_quad(trunc, f, "--cutoff-step", "cutoff_step", "cutoff increase per rung");

  auto* st = app.add_subcommand("stats", "quadrature and photon statistics of one output port");
  add_common(st, f);
  add_amplitudes(st, f);
  add_text(st, f, "--port", "port", "c, d, C or D");
  add_number(st, f, "--kappa", "kappa", "coupling strength");
  add_quad(st, f, "--dims", "dims", "cutoffs (default: from the leakage tolerance)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  for (auto* sub : app.get_subcommands())
    return run(sub->get_name(), f);
  return kExitUsage;
}
