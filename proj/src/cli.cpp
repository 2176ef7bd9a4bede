#include "sifdecay/cli.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "sifdecay/angles.hpp"
#include "sifdecay/cantor.hpp"
#include "sifdecay/errors.hpp"
#include "sifdecay/gauge.hpp"
#include "sifdecay/poisson.hpp"
#include "sifdecay/profile.hpp"
#include "sifdecay/scan.hpp"

namespace sifdecay {

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path);
  out << text;
  if (!out) throw Error("cannot write " + path);
}

void emit(const std::string& out_path, const std::string& text) {
  if (out_path.empty())
    std::cout << text;
  else
    write_file(out_path, text);
}

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

CantorModel load_model(const std::string& path) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(read_file(path));
  } catch (const nlohmann::json::exception& e) {
    throw SchemaError(std::string("model file is not valid JSON: ") + e.what());
  }
  return CantorModel::from_json(j);
}

nlohmann::json frostman_json(const FrostmanReport& fr) {
  return {{"pass", fr.pass},           {"max_ratio", fr.max_ratio},
          {"grid_max_ratio", fr.grid_max_ratio}, {"argmax_t", fr.argmax_t},
          {"argmax_theta", fr.argmax_theta},     {"scale_points", fr.scale_points},
          {"theta_points", fr.theta_points},     {"t_lo", fr.t_lo}};
}

int cmd_build(const std::string& profile_path, int depth, const std::string& out_path) {
  nlohmann::json pj;
  try {
    pj = nlohmann::json::parse(read_file(profile_path));
  } catch (const nlohmann::json::exception& e) {
    throw SchemaError(std::string("profile file is not valid JSON: ") + e.what());
  }
  DecayProfile profile = DecayProfile::from_json(pj);
  Gauge gauge(profile);

  BuildOptions opts;
  opts.max_depth = depth;
  opts.depth_hint = std::min(12, depth);
  CantorModel model = build_model(gauge, opts);
  FrostmanReport fr = verify_frostman(model);

  nlohmann::json mj = model.to_json();
  mj["frostman"] = frostman_json(fr);
  emit(out_path, mj.dump(2) + "\n");
  return fr.pass ? 0 : 2;
}

int cmd_eval(const std::string& model_path, const std::string& radii_spec, double tol,
             const std::string& out_path) {
  CantorModel model = load_model(model_path);
  std::vector<double> radii = parse_radii_spec(radii_spec);
  double theta = model.base_start();

  std::string csv = "r,u,v,modulus,u_error,v_error\n";
  bool indeterminate = false;
  for (double r : radii) {
    if (!(r >= 0.0) || !(r < 1.0)) throw SchemaError("radii must lie in [0,1)");
    try {
      PointEval pe = log_modulus(model, r, theta, tol);
      csv += fmt17(pe.r);
      csv += ',';
      csv += fmt17(pe.u);
      csv += ',';
      csv += fmt17(pe.v);
      csv += ',';
      csv += fmt17(std::exp(-pe.u));
      csv += ',';
      csv += fmt17(pe.u_error);
      csv += ',';
      csv += fmt17(pe.v_error);
      csv += '\n';
    } catch (const PrecisionError&) {
      csv += fmt17(r);
      csv += ",nan,nan,nan,nan,nan\n";
      indeterminate = true;
    }
  }
  emit(out_path, csv);
  return indeterminate ? 2 : 0;
}

int cmd_scan(const std::string& model_path, const std::string& radii_spec, double tol,
             const std::string& out_path) {
  CantorModel model = load_model(model_path);
  std::vector<double> radii = parse_radii_spec(radii_spec);
  std::vector<ScanReport> reports = certify_estimate(model, model.gauge(), radii, tol);
  emit(out_path, scan_to_csv(reports));
  for (const ScanReport& rep : reports)
    if (rep.status != "ok" || !rep.pass_estimate || !rep.pass_proof_chain) return 2;
  return 0;
}

int cmd_verify(const std::string& model_path, double tol, const std::string& out_path) {
  CantorModel model = load_model(model_path);
  const Gauge& gauge = model.gauge();
  nlohmann::json report;
  bool all = true;

  FrostmanReport fr = verify_frostman(model);
  report["frostman"] = frostman_json(fr);
  all = all && fr.pass;

  {
    nlohmann::json cases = nlohmann::json::array();
    bool pass = true;
    for (double r : {0.0, 0.5, 0.9, 0.99}) {
      double integral = kernel_integral(r, 0.0, kPi);
      bool ok = std::fabs(integral - kPi) <= 1e-9;
      pass = pass && ok;
      cases.push_back({{"r", r}, {"integral", integral}, {"pass", ok}});
    }
    report["normalization"] = {{"pass", pass}, {"cases", cases}};
    all = all && pass;
  }

  {
    nlohmann::json cases = nlohmann::json::array();
    bool pass = true;
    for (double r0 : {0.3, 0.7}) {
      for (double th0 : {0.0, 2.0, 4.0}) {
        double rho = 0.4 * (1.0 - r0);
        double center = log_modulus(model, r0, th0, tol, false).u;
        double mean = circle_mean_log_modulus(model, r0, th0, rho, 256, tol);
        bool ok = std::fabs(mean - center) <= 1e-6;
        pass = pass && ok;
        cases.push_back({{"r", r0}, {"theta", th0}, {"gap", mean - center}, {"pass", ok}});
      }
    }
    report["mean_value"] = {{"pass", pass}, {"cases", cases}};
    all = all && pass;
  }

  {
    nlohmann::json cases = nlohmann::json::array();
    bool pass = true;
    for (double r : {0.5, 0.9, 0.99}) {
      CircleMin cm = min_on_circle(model, r, tol);
      double bound = split_bound(gauge, r, kPi * (1.0 - r)).total();
      bool ok = cm.u_max + cm.u_max_error <= bound + tol;
      pass = pass && ok;
      cases.push_back({{"r", r}, {"u_max", cm.u_max}, {"bound", bound}, {"pass", ok}});
    }
    report["split_bound"] = {{"pass", pass}, {"cases", cases}};
    all = all && pass;
  }

  {
    CantorModel half = model.with_mass_scale(0.5 * model.mass_scale());
    nlohmann::json cases = nlohmann::json::array();
    bool pass = true;
    for (double r : {0.0, 0.5, 0.9}) {
      PointEval a = log_modulus(model, r, 1.0, tol, false);
      PointEval b = log_modulus(half, r, 1.0, tol, false);
      bool ok = std::fabs(b.u - 0.5 * a.u) <= 0.5 * a.u_error + b.u_error + 1e-12;
      pass = pass && ok;
      cases.push_back({{"r", r}, {"u", a.u}, {"u_half_scale", b.u}, {"pass", ok}});
    }
    report["scaling_law"] = {{"pass", pass}, {"cases", cases}};
    all = all && pass;
  }

  report["pass"] = all;
  emit(out_path, report.dump(2) + "\n");
  return all ? 0 : 2;
}

int cmd_export_plot(const std::string& in_path, const std::string& out_path) {
  std::string text = read_file(in_path);
  std::istringstream lines(text);
  std::string line;
  if (!std::getline(lines, line)) throw SchemaError("scan CSV is empty");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  const std::string expected =
      "r,min_modulus_lo,min_modulus_hi,argmin_theta,omega_r,proof_bound,"
      "pass_estimate,pass_proof_chain,status";
  if (line != expected) throw SchemaError("scan CSV header does not match the scan schema");

  std::string out = "r,min_modulus,omega_r\n";
  while (std::getline(lines, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<std::string> tok;
    std::size_t pos = 0;
    while (true) {
      std::size_t next = line.find(',', pos);
      tok.push_back(line.substr(pos, next - pos));
      if (next == std::string::npos) break;
      pos = next + 1;
    }
    if (tok.size() != 9) throw SchemaError("scan CSV row does not have 9 columns");
    out += tok[0];
    out += ',';
    out += tok[1];
    out += ',';
    out += tok[4];
    out += '\n';
  }
  emit(out_path, out);
  return 0;
}

}  // namespace

int run_cli(const std::vector<std::string>& args) {
  CLI::App app{"decay-certified singular inner function toolkit"};
  app.require_subcommand(1);

  std::string profile_path, model_path, out_path, radii_spec, plot_input;
  double tol = 1e-9;
  int depth = 40;

  CLI::App* build = app.add_subcommand("build", "build and calibrate a model from a profile");
  build->add_option("--profile", profile_path, "decay profile JSON")->required();
  build->add_option("--depth", depth, "maximum generation to materialize");
  build->add_option("--out", out_path, "model JSON output path");

  CLI::App* eval = app.add_subcommand("eval", "evaluate S along a radius into the support");
  eval->add_option("--model", model_path, "model JSON")->required();
  eval->add_option("--radii", radii_spec, "radii list or geo:<r0>:<end gap>:<n>")->required();
  eval->add_option("--tol", tol, "quadrature tolerance on u");
  eval->add_option("--out", out_path, "CSV output path (stdout if omitted)");

  CLI::App* scan = app.add_subcommand("scan", "certify the minimum-modulus estimate over circles");
  scan->add_option("--model", model_path, "model JSON")->required();
  scan->add_option("--radii", radii_spec, "radii list or geo:<r0>:<end gap>:<n>");
  scan->add_option("--tol", tol, "quadrature tolerance on u");
  scan->add_option("--out", out_path, "CSV output path (stdout if omitted)");

  CLI::App* verify = app.add_subcommand("verify", "run the invariant suites against a model");
  verify->add_option("--model", model_path, "model JSON")->required();
  verify->add_option("--tol", tol, "quadrature tolerance on u");
  verify->add_option("--out", out_path, "JSON report path (stdout if omitted)");

  CLI::App* plot = app.add_subcommand("export-plot", "extract plot columns from a scan CSV");
  plot->add_option("input", plot_input, "scan CSV path")->required();
  plot->add_option("--out", out_path, "plot CSV path (stdout if omitted)");

  std::vector<std::string> rev(args.rbegin(), args.rend());
  try {
    app.parse(rev);
  } catch (const CLI::CallForHelp&) {
    std::cout << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    std::cout << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    std::cerr << e.what() << "\n";
    return 1;
  }

  try {
    if (build->parsed()) return cmd_build(profile_path, depth, out_path);
    if (eval->parsed()) return cmd_eval(model_path, radii_spec, tol, out_path);
    if (scan->parsed()) return cmd_scan(model_path, radii_spec, tol, out_path);
    if (verify->parsed()) return cmd_verify(model_path, tol, out_path);
    if (plot->parsed()) return cmd_export_plot(plot_input, out_path);
  } catch (const PrecisionError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const CalibrationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const ConstructionError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}

}  // namespace sifdecay
