// Command-line front end over the qdeform C API: builds distributions and
// convergence sweeps from flags and emits CSV or JSON for plotting and
// regression fixtures.
//
// Exit codes: 0 success, 2 invalid arguments (message names the offending
// flag), 3 numeric failure.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "qdeform/qdeform.h"

namespace {

using ordered_json = nlohmann::ordered_json;

constexpr int kExitInvalid = 2;
constexpr int kExitNumeric = 3;

struct CliError {
  int code;
  std::string message;
};

// 17 significant digits: round-trip safe, locale-independent.
std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

struct Dataset {
  std::string command;
  ordered_json parameters;
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
};

void check(qd_status st, const std::string& flag) {
  if (st == QD_OK) return;
  const std::string msg = flag + ": " + qd_last_error();
  if (st == QD_ERR_NUMERIC) throw CliError{kExitNumeric, msg};
  throw CliError{kExitInvalid, msg};
}

// computation failures unrelated to a specific flag
void check_run(qd_status st, const std::string& context) {
  if (st == QD_OK) return;
  throw CliError{st == QD_ERR_NUMERIC ? kExitNumeric : kExitInvalid,
                 context + ": " + qd_last_error()};
}

struct TableHandle {
  qd_table* t = nullptr;
  ~TableHandle() { qd_table_free(t); }
};

struct PmfHandle {
  qd_pmf* p = nullptr;
  ~PmfHandle() { qd_pmf_free(p); }
};

void validate_q(double q) {
  if (!(q > 0.0) || !(q < 2.0)) {
    throw CliError{kExitInvalid, "--q must lie in the open interval (0, 2)"};
  }
}

void validate_unit(double v, const std::string& flag) {
  if (!(v > 0.0) || !(v < 1.0)) {
    throw CliError{kExitInvalid, flag + " must lie in the open interval (0, 1)"};
  }
}

void validate_n(std::uint64_t n) {
  if (n < 2) throw CliError{kExitInvalid, "--n must be at least 2"};
}

std::vector<std::uint64_t> normalize_n_list(std::vector<std::uint64_t> ns) {
  if (ns.empty()) throw CliError{kExitInvalid, "--n-list must not be empty"};
  std::sort(ns.begin(), ns.end());
  ns.erase(std::unique(ns.begin(), ns.end()), ns.end());
  if (ns.front() < 2) throw CliError{kExitInvalid, "--n-list entries must be >= 2"};
  return ns;
}

qd_norm_mode parse_mode(const std::string& mode) {
  if (mode == "shift") return QD_NORM_MAX_SHIFT;
  if (mode == "exact") return QD_NORM_EXACT_CQ;
  throw CliError{kExitInvalid, "--mode must be 'shift' or 'exact'"};
}

// ---- per-command summaries, derived from the dataset alone so that
// `report` reproduces them from a JSON file byte for byte ----

std::size_t column_index(const Dataset& d, const std::string& name) {
  for (std::size_t i = 0; i < d.columns.size(); ++i) {
    if (d.columns[i] == name) return i;
  }
  throw CliError{kExitInvalid, "dataset lacks column '" + name + "'"};
}

double param_num(const Dataset& d, const std::string& key) {
  return d.parameters.at(key).get<double>();
}

std::string summarize_pmf(const Dataset& d) {
  const std::size_t cp = column_index(d, "prob");
  const std::size_t cs = column_index(d, "scaled_density");
  std::size_t peak = 0;
  for (std::size_t i = 1; i < d.rows.size(); ++i) {
    if (d.rows[i][cp] > d.rows[peak][cp]) peak = i;
  }
  const double sigma = d.rows[peak][cs] / d.rows[peak][cp];
  return "pmf q=" + fmt(param_num(d, "q")) + " n=" + fmt(param_num(d, "n")) +
         " r=" + fmt(param_num(d, "r")) + " mode=" +
         d.parameters.at("mode").get<std::string>() + " peak_index=" +
         std::to_string(peak) + " peak_prob=" + fmt(d.rows[peak][cp]) +
         " sigma_q=" + fmt(sigma);
}

std::string summarize_stirling(const Dataset& d) {
  const std::size_t ce = column_index(d, "err_refined");
  return "stirling q=" + fmt(param_num(d, "q")) + " c_q=" +
         fmt(param_num(d, "c_q")) + " residual_bound=" +
         fmt(param_num(d, "residual_bound")) + " n_max=" +
         fmt(d.rows.back()[column_index(d, "n")]) + " err_refined_last=" +
         fmt(d.rows.back()[ce]);
}

std::string summarize_divergence(const Dataset& d) {
  const auto& row = d.rows.front();
  return "divergence q=" + fmt(row[column_index(d, "q")]) + " alpha=" +
         fmt(row[column_index(d, "alpha")]) + " D_q=" +
         fmt(row[column_index(d, "D_q")]) + " D_alpha=" +
         fmt(row[column_index(d, "D_alpha")]) + " rate=" +
         fmt(row[column_index(d, "rate")]);
}

std::string summarize_ldp(const Dataset& d) {
  const auto& last = d.rows.back();
  return "ldp q=" + fmt(param_num(d, "q")) + " r=" + fmt(param_num(d, "r")) +
         " x=" + fmt(param_num(d, "x")) + " n_max=" +
         fmt(last[column_index(d, "n")]) + " target=" +
         fmt(last[column_index(d, "target")]) + " final_abs_err=" +
         fmt(last[column_index(d, "abs_err")]);
}

std::string summarize_clt(const Dataset& d) {
  const std::size_t cr = column_index(d, "residual");
  double mx = 0.0;
  for (const auto& row : d.rows) mx = std::max(mx, std::fabs(row[cr]));
  return "clt q=" + fmt(param_num(d, "q")) + " n=" + fmt(param_num(d, "n")) +
         " r=" + fmt(param_num(d, "r")) + " window=" + fmt(param_num(d, "window")) +
         " points=" + std::to_string(d.rows.size()) + " max_abs_residual=" + fmt(mx);
}

std::string summarize_collapse(const Dataset& d) {
  const std::size_t cid = column_index(d, "series_id");
  const std::size_t cx = column_index(d, "x");
  const std::size_t cg = column_index(d, "g");
  const std::size_t cb = column_index(d, "fit_beta");
  const double window = param_num(d, "window");

  std::vector<double> ids;
  std::map<double, std::vector<std::pair<double, double>>> series;
  std::map<double, double> betas;
  for (const auto& row : d.rows) {
    const double id = row[cid];
    if (series.find(id) == series.end()) ids.push_back(id);
    series[id].push_back({row[cx], row[cg]});
    betas[id] = row[cb];
  }
  double beta_spread = 0.0;
  for (double id : ids) {
    beta_spread = std::max(
        beta_spread, std::fabs(betas[id] - betas[ids.front()]) / betas[ids.front()]);
  }
  // sup distance between the first and last series over the common window
  double supdist = 0.0, peak = 0.0;
  const auto& a = series[ids.front()];
  const auto& b = series[ids.back()];
  for (const auto& pt : a) peak = std::max(peak, pt.second);
  if (ids.size() > 1) {
    std::size_t j = 0;
    for (const auto& pt : a) {
      if (std::fabs(pt.first) > window) continue;
      if (pt.first < b.front().first || pt.first > b.back().first) continue;
      while (j + 1 < b.size() && b[j + 1].first < pt.first) ++j;
      if (j + 1 >= b.size()) break;
      const double t01 = (pt.first - b[j].first) / (b[j + 1].first - b[j].first);
      const double g = b[j].second + t01 * (b[j + 1].second - b[j].second);
      supdist = std::max(supdist, std::fabs(pt.second - g));
    }
  }
  std::string line = "collapse q=" + fmt(param_num(d, "q")) + " r=" +
                     fmt(param_num(d, "r")) + " window=" + fmt(window) + " series=";
  for (std::size_t i = 0; i < ids.size(); ++i) {
    line += (i ? "," : "") + fmt(ids[i]);
  }
  line += " beta_spread_rel=" + fmt(beta_spread) +
          " supdist_over_peak=" + fmt(peak > 0.0 ? supdist / peak : 0.0);
  return line;
}

std::string summarize(const Dataset& d) {
  if (d.command == "pmf") return summarize_pmf(d);
  if (d.command == "stirling") return summarize_stirling(d);
  if (d.command == "divergence") return summarize_divergence(d);
  if (d.command == "ldp") return summarize_ldp(d);
  if (d.command == "clt") return summarize_clt(d);
  if (d.command == "collapse") return summarize_collapse(d);
  throw CliError{kExitInvalid, "unknown dataset command '" + d.command + "'"};
}

// ---- output ----

void write_csv(const Dataset& d, std::ostream& os) {
  for (std::size_t i = 0; i < d.columns.size(); ++i) {
    os << (i ? "," : "") << d.columns[i];
  }
  os << "\n";
  for (const auto& row : d.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      os << (i ? "," : "") << fmt(row[i]);
    }
    os << "\n";
  }
}

ordered_json to_json(const Dataset& d) {
  ordered_json j;
  j["command"] = d.command;
  j["parameters"] = d.parameters;
  j["columns"] = d.columns;
  j["rows"] = d.rows;
  return j;
}

void emit(const Dataset& d, const std::string& output, const std::string& format) {
  std::string payload;
  if (format == "csv") {
    std::ostringstream ss;
    write_csv(d, ss);
    payload = ss.str();
  } else if (format == "json") {
    payload = to_json(d).dump(2);
    payload += "\n";
  } else {
    throw CliError{kExitInvalid, "--format must be 'csv' or 'json'"};
  }
  if (output.empty()) {
    std::cout << payload;
    std::cerr << summarize(d) << "\n";  // keep piped data clean
  } else {
    std::ofstream f(output, std::ios::binary);
    if (!f) throw CliError{kExitInvalid, "--output: cannot open '" + output + "'"};
    f << payload;
    std::cout << summarize(d) << "\n";
  }
}

// ---- commands ----

Dataset run_pmf(double q, std::uint64_t n, double r, const std::string& mode,
                const std::string&) {
  validate_q(q);
  validate_n(n);
  validate_unit(r, "--r");
  const qd_norm_mode m = parse_mode(mode);
  TableHandle table;
  check(qd_table_create(q, n, &table.t), "--n");
  PmfHandle pmf;
  check(qd_pmf_build(table.t, n, r, m, &pmf.p), "--n");
  const std::size_t size = qd_pmf_size(pmf.p);
  std::vector<double> probs(size), weights(size), grid(size);
  check_run(qd_pmf_probs(pmf.p, probs.data(), size), "pmf probs");
  check_run(qd_pmf_qlog_weights(pmf.p, weights.data(), size), "pmf weights");
  check_run(qd_pmf_grid(pmf.p, grid.data(), size), "pmf grid");
  double sigma = 0.0;
  check_run(qd_pmf_sigma(pmf.p, &sigma), "pmf sigma");

  Dataset d;
  d.command = "pmf";
  d.parameters = {{"q", q}, {"n", n}, {"r", r}, {"mode", mode}};
  d.columns = {"k", "x_k", "qlog_weight", "prob", "scaled_density"};
  d.rows.reserve(size);
  for (std::size_t k = 0; k < size; ++k) {
    d.rows.push_back({static_cast<double>(k), grid[k], weights[k], probs[k],
                      sigma * probs[k]});
  }
  return d;
}

Dataset run_stirling(double q, std::vector<std::uint64_t> ns) {
  validate_q(q);
  ns = normalize_n_list(ns);
  const std::uint64_t n_ref = std::max<std::uint64_t>(ns.back(), 1000);
  TableHandle table;
  check(qd_table_create(q, 2 * n_ref, &table.t), "--n-list");
  double c_q = 0.0, bound = 0.0;
  check(qd_table_estimate_cq(table.t, n_ref, &c_q, &bound), "--n-list");

  Dataset d;
  d.command = "stirling";
  d.parameters = {{"q", q},
                  {"n_list", ns},
                  {"c_q", c_q},
                  {"residual_bound", bound},
                  {"estimation_n", n_ref}};
  d.columns = {"n", "exact", "leading", "refined", "err_leading", "err_refined"};
  for (std::uint64_t n : ns) {
    double exact = 0.0, leading = 0.0, refined = 0.0, defect = 0.0;
    check_run(qd_table_q_ln_factorial(table.t, n, &exact), "stirling exact");
    check_run(qd_stirling_leading(q, n, &leading), "stirling leading");
    check_run(qd_stirling_refined(q, n, c_q, &refined), "stirling refined");
    check_run(qd_table_stirling_defect(table.t, n, c_q, &defect), "stirling defect");
    d.rows.push_back({static_cast<double>(n), exact, leading, refined,
                      exact - leading, defect});
  }
  return d;
}

Dataset run_divergence(double q, double x, double r) {
  validate_q(q);
  validate_unit(x, "--x");
  validate_unit(r, "--r");
  const double p[2] = {x, 1.0 - x};
  const double ref[2] = {r, 1.0 - r};
  double alpha = 0.0, dq = 0.0, dalpha = 0.0, rate = 0.0;
  check(qd_alpha_from_q(q, 0, &alpha), "--q");
  check(qd_q_divergence(q, p, ref, 2, &dq), "--q");
  check(qd_alpha_divergence(alpha, p, ref, 2, &dalpha), "--q");
  check(qd_rate_function(q, x, r, &rate), "--x");

  Dataset d;
  d.command = "divergence";
  d.parameters = {{"q", q}, {"x", x}, {"r", r}};
  d.columns = {"q", "alpha", "D_q", "D_alpha", "rate"};
  d.rows.push_back({q, alpha, dq, dalpha, rate});
  return d;
}

Dataset run_ldp(double q, double r, double x, std::vector<std::uint64_t> ns) {
  validate_q(q);
  validate_unit(r, "--r");
  validate_unit(x, "--x");
  ns = normalize_n_list(ns);
  std::vector<double> stats(ns.size());
  double target = 0.0;
  check(qd_ldp_series(q, r, x, ns.data(), ns.size(), stats.data(), &target),
        "--n-list");

  Dataset d;
  d.command = "ldp";
  d.parameters = {{"q", q}, {"r", r}, {"x", x}, {"n_list", ns}};
  d.columns = {"n", "scaled_stat", "target", "abs_err"};
  for (std::size_t i = 0; i < ns.size(); ++i) {
    d.rows.push_back({static_cast<double>(ns[i]), stats[i], target,
                      std::fabs(stats[i] - target)});
  }
  return d;
}

Dataset run_clt(double q, std::uint64_t n, double r, double window) {
  validate_q(q);
  validate_n(n);
  validate_unit(r, "--r");
  if (!(window > 0.0)) throw CliError{kExitInvalid, "--window must be positive"};
  std::size_t count = 0;
  check(qd_clt_residual_count(q, n, r, window, &count), "--window");
  std::vector<std::uint64_t> ks(count);
  std::vector<double> xs(count), res(count);
  double maxres = 0.0;
  check(qd_clt_residuals(q, n, r, window, ks.data(), xs.data(), res.data(), count,
                         &count, &maxres),
        "--window");

  Dataset d;
  d.command = "clt";
  d.parameters = {{"q", q}, {"n", n}, {"r", r}, {"window", window}};
  d.columns = {"k", "x_k", "residual"};
  for (std::size_t i = 0; i < count; ++i) {
    d.rows.push_back({static_cast<double>(ks[i]), xs[i], res[i]});
  }
  return d;
}

Dataset run_collapse(double q, double r, std::vector<std::uint64_t> ns, double window,
                     const std::string& mode) {
  validate_q(q);
  validate_unit(r, "--r");
  ns = normalize_n_list(ns);
  if (!(window > 0.0)) throw CliError{kExitInvalid, "--window must be positive"};
  const qd_norm_mode m = parse_mode(mode);

  Dataset d;
  d.command = "collapse";
  d.parameters = {{"q", q}, {"r", r}, {"n_list", ns}, {"window", window}, {"mode", mode}};
  d.columns = {"series_id", "x", "g", "fit_beta", "fit_amplitude", "sup_error"};
  for (std::uint64_t n : ns) {
    TableHandle table;
    check(qd_table_create(q, n, &table.t), "--n-list");
    PmfHandle pmf;
    check(qd_pmf_build(table.t, n, r, m, &pmf.p), "--n-list");
    const std::size_t size = qd_pmf_size(pmf.p);
    std::vector<double> probs(size), grid(size);
    check_run(qd_pmf_probs(pmf.p, probs.data(), size), "collapse probs");
    check_run(qd_pmf_grid(pmf.p, grid.data(), size), "collapse grid");
    double sigma = 0.0;
    check_run(qd_pmf_sigma(pmf.p, &sigma), "collapse sigma");
    std::vector<double> g(size);
    for (std::size_t k = 0; k < size; ++k) g[k] = sigma * probs[k];
    double beta = 0.0, amp = 0.0, sup = 0.0;
    check(qd_fit_q_gaussian(q, grid.data(), g.data(), size, window, &beta, &amp, &sup),
          "--window");
    for (std::size_t k = 0; k < size; ++k) {
      if (std::fabs(grid[k]) > window) continue;
      d.rows.push_back({static_cast<double>(n), grid[k], g[k], beta, amp, sup});
    }
  }
  return d;
}

Dataset load_dataset(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw CliError{kExitInvalid, "--input: cannot open '" + path + "'"};
  ordered_json j;
  try {
    f >> j;
  } catch (const std::exception& e) {
    throw CliError{kExitInvalid, std::string("--input: JSON parse failure: ") + e.what()};
  }
  Dataset d;
  try {
    d.command = j.at("command").get<std::string>();
    d.parameters = j.at("parameters");
    d.columns = j.at("columns").get<std::vector<std::string>>();
    d.rows = j.at("rows").get<std::vector<std::vector<double>>>();
  } catch (const std::exception& e) {
    throw CliError{kExitInvalid, std::string("--input: malformed report: ") + e.what()};
  }
  if (d.rows.empty()) throw CliError{kExitInvalid, "--input: report has no rows"};
  return d;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"generalized (q-deformed) binomial distributions: construction, "
               "divergences and limit-theorem diagnostics"};
  app.require_subcommand(1);

  double q = 1.0, r = 0.5, x = 0.3;
  double clt_window = 2.0, collapse_window = 3.0;
  std::uint64_t n = 0;
  std::vector<std::uint64_t> n_list;
  std::string mode = "shift", output, format = "csv", input;

  const auto add_io = [&](CLI::App* cmd) {
    cmd->add_option("--output", output, "output file (stdout when omitted)");
    cmd->add_option("--format", format, "csv or json")->capture_default_str();
  };

  CLI::App* pmf = app.add_subcommand("pmf", "emit the full distribution");
  pmf->add_option("--q", q, "deformation parameter in (0,2)")->required();
  pmf->add_option("--n", n, "number of trials")->required();
  pmf->add_option("--r", r, "success parameter in (0,1)")->required();
  pmf->add_option("--mode", mode, "normalization: shift or exact")->capture_default_str();
  add_io(pmf);

  CLI::App* stirling = app.add_subcommand("stirling", "q-Stirling sweep with c_q estimate");
  stirling->add_option("--q", q)->required();
  stirling->add_option("--n-list", n_list, "comma-separated n values")
      ->required()
      ->delimiter(',');
  add_io(stirling);

  CLI::App* divergence = app.add_subcommand("divergence", "q- and alpha-divergence row");
  divergence->add_option("--q", q)->required();
  divergence->add_option("--x", x, "first component of p = (x, 1-x)")->required();
  divergence->add_option("--r", r, "first component of r = (r, 1-r)")->required();
  add_io(divergence);

  CLI::App* ldp = app.add_subcommand("ldp", "scaled q-log tail statistic sweep");
  ldp->add_option("--q", q)->required();
  ldp->add_option("--r", r)->required();
  ldp->add_option("--x", x, "tail threshold in (0,1)")->required();
  ldp->add_option("--n-list", n_list)->required()->delimiter(',');
  add_io(ldp);

  CLI::App* clt = app.add_subcommand("clt", "local-limit residuals over |x_k| <= window");
  clt->add_option("--q", q)->required();
  clt->add_option("--n", n)->required();
  clt->add_option("--r", r)->required();
  clt->add_option("--window,--L", clt_window, "standardized half-width")
      ->capture_default_str();
  add_io(clt);

  CLI::App* collapse = app.add_subcommand("collapse", "scaled densities and q-Gaussian fits");
  collapse->add_option("--q", q)->required();
  collapse->add_option("--r", r)->required();
  collapse->add_option("--n-list", n_list)->required()->delimiter(',');
  collapse->add_option("--window", collapse_window, "fit/comparison window")
      ->capture_default_str();
  collapse->add_option("--mode", mode)->capture_default_str();
  add_io(collapse);

  CLI::App* report = app.add_subcommand("report", "re-derive the summary from a JSON report");
  report->add_option("--input", input, "JSON report produced with --format json")
      ->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help
    app.exit(e);
    return kExitInvalid;
  }

  try {
    if (report->parsed()) {
      const Dataset d = load_dataset(input);
      std::cout << summarize(d) << "\n";
      return 0;
    }
    Dataset d;
    if (pmf->parsed()) {
      d = run_pmf(q, n, r, mode, format);
    } else if (stirling->parsed()) {
      d = run_stirling(q, n_list);
    } else if (divergence->parsed()) {
      d = run_divergence(q, x, r);
    } else if (ldp->parsed()) {
      d = run_ldp(q, r, x, n_list);
    } else if (clt->parsed()) {
      d = run_clt(q, n, r, clt_window);
    } else if (collapse->parsed()) {
      d = run_collapse(q, r, n_list, collapse_window, mode);
    }
    emit(d, output, format);
    return 0;
  } catch (const CliError& e) {
    std::cerr << "qdeform: error: " << e.message << "\n";
    if (e.code == kExitNumeric && !output.empty() && format == "json") {
      // diagnostic payload for machine consumers
      std::ofstream f(output, std::ios::binary);
      if (f) {
        ordered_json j;
        j["error"] = e.message;
        f << j.dump(2) << "\n";
      }
    }
    return e.code;
  } catch (const std::exception& e) {
    std::cerr << "qdeform: internal error: " << e.what() << "\n";
    return kExitNumeric;
  }
}
