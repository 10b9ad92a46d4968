#include "mel/experiment.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <memory>
#include <set>
#include <sstream>

#include "json.hpp"
#include "mel/data.hpp"
#include "mel/errors.hpp"
#include "mel/eval.hpp"
#include "mel/mahalanobis.hpp"
#include "mel/ot.hpp"
#include "mel/reference.hpp"
#include "mel/runtime.hpp"

namespace mel {

namespace {

using nlohmann::json;

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

double to_double(const FlatConfig& cfg, const std::string& key) {
  const std::string& s = cfg.at(key);
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw ConfigError(key + ": not a number: '" + s + "'");
  }
}

Index to_index(const FlatConfig& cfg, const std::string& key) {
  const std::string& s = cfg.at(key);
  try {
    std::size_t used = 0;
    const long long v = std::stoll(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return static_cast<Index>(v);
  } catch (const std::exception&) {
    throw ConfigError(key + ": not an integer: '" + s + "'");
  }
}

std::uint64_t to_u64(const FlatConfig& cfg, const std::string& key) {
  const std::string& s = cfg.at(key);
  try {
    std::size_t used = 0;
    const unsigned long long v = std::stoull(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw ConfigError(key + ": not a nonnegative integer: '" + s + "'");
  }
}

bool to_bool(const FlatConfig& cfg, const std::string& key) {
  const std::string& s = cfg.at(key);
  if (s == "true" || s == "1" || s == "yes") return true;
  if (s == "false" || s == "0" || s == "no") return false;
  throw ConfigError(key + ": not a boolean: '" + s + "'");
}

// Every key the configuration understands, across all families.
const std::set<std::string>& key_catalog() {
  static const std::set<std::string> keys = {
      "jobs",
      "data.source", "data.shape", "data.n", "data.m", "data.peak_width",
      "data.path", "data.exp_transform", "data.transpose",
      "method.family", "method.epsilon", "method.marginal_tol",
      "method.max_sweeps", "method.warm_start", "method.log_domain",
      "method.kernel",
      "method.kernel_param", "method.power_tol", "method.power_max_iters",
      "method.lambda_f", "method.cross_check_limit",
      "reference.family", "reference.tau", "reference.tau_samples",
      "reference.tau_features",
      "solver.algorithm", "solver.alpha", "solver.gamma_f", "solver.gamma_g",
      "solver.tol_residual", "solver.max_iters", "solver.seed",
      "solver.batch_fraction", "solver.jacobi", "solver.symmetric_pairs",
      "solver.validate_every", "solver.labels_path", "solver.patience",
      "solver.a0", "solver.a0_path",
      "output.dir", "output.heatmap",
  };
  return keys;
}

void put_default(FlatConfig& cfg, const std::string& key,
                 const std::string& value) {
  cfg.emplace(key, value);
}

}  // namespace

FlatConfig parse_config_text(const std::string& text, const std::string& origin) {
  FlatConfig cfg;
  std::istringstream in(text);
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    const auto begin = line.find_first_not_of(" \t\r");
    if (begin == std::string::npos) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      std::ostringstream os;
      os << origin << " line " << lineno << ": expected key=value";
      throw ParseError(os.str());
    }
    auto trim = [](std::string s) {
      const auto b = s.find_first_not_of(" \t\r");
      if (b == std::string::npos) return std::string();
      const auto e = s.find_last_not_of(" \t\r");
      return s.substr(b, e - b + 1);
    };
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty()) {
      std::ostringstream os;
      os << origin << " line " << lineno << ": empty key";
      throw ParseError(os.str());
    }
    cfg[key] = value;
  }
  return cfg;
}

FlatConfig parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open config file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config_text(buf.str(), path);
}

void apply_override(FlatConfig& cfg, const std::string& keyval) {
  const auto eq = keyval.find('=');
  if (eq == std::string::npos || eq == 0) {
    throw ConfigError("override must look like key=value: '" + keyval + "'");
  }
  cfg[keyval.substr(0, eq)] = keyval.substr(eq + 1);
}

FlatConfig resolve_config(const FlatConfig& cfg) {
  for (const auto& [key, value] : cfg) {
    if (key_catalog().count(key) == 0) {
      throw ConfigError("unknown config key: " + key);
    }
    (void)value;
  }
  FlatConfig out = cfg;

  put_default(out, "jobs", "0");
  put_default(out, "data.source", "synthetic");
  const std::string source = out.at("data.source");
  if (source == "synthetic") {
    put_default(out, "data.shape", "h1");
    put_default(out, "data.n", "100");
    put_default(out, "data.m", "80");
    put_default(out, "data.peak_width", "400");
    shape_from_string(out.at("data.shape"));
  } else if (source == "csv") {
    if (out.count("data.path") == 0) {
      throw ConfigError("data.source=csv requires data.path");
    }
    put_default(out, "data.exp_transform", "false");
    put_default(out, "data.transpose", "false");
  } else {
    throw ConfigError("data.source must be synthetic or csv");
  }

  put_default(out, "method.family", "sinkhorn");
  const std::string family = out.at("method.family");
  if (family == "sinkhorn") {
    put_default(out, "method.epsilon", "0.05");
    put_default(out, "method.marginal_tol", "1e-9");
    put_default(out, "method.max_sweeps", "10000");
    put_default(out, "method.warm_start", "true");
    put_default(out, "method.log_domain", "true");
  } else if (family == "exact_ot") {
    // no method knobs
  } else if (family == "mahalanobis") {
    put_default(out, "method.kernel", "gaussian");
    put_default(out, "method.kernel_param", "1");
    const std::string kernel = out.at("method.kernel");
    if (kernel != "gaussian" && kernel != "inverse_multiquadric" &&
        kernel != "laplacian") {
      throw ConfigError("method.kernel must be gaussian, inverse_multiquadric,"
                        " or laplacian");
    }
  } else if (family == "graph_laplacian") {
    put_default(out, "method.power_tol", "1e-12");
    put_default(out, "method.power_max_iters", "100000");
    put_default(out, "method.cross_check_limit", "50");
    if (cfg.count("solver.algorithm") > 0) {
      throw ConfigError("the graph-laplacian family is solved by its eigen "
                        "pipeline, not by the fixed-point algorithms");
    }
  } else {
    throw ConfigError("method.family must be exact_ot, sinkhorn, mahalanobis,"
                      " or graph_laplacian");
  }

  if (family != "graph_laplacian") {
    put_default(out, "reference.family",
                family == "mahalanobis" ? "identity" : "scaled_l1");
    const std::string ref_family = out.at("reference.family");
    if (ref_family != "scaled_l1" && ref_family != "identity") {
      throw ConfigError("reference.family must be scaled_l1 or identity");
    }
    if (family == "mahalanobis" && ref_family != "identity") {
      throw ConfigError("the kernel family needs a PSD reference; "
                        "use reference.family=identity");
    }
    put_default(out, "reference.tau", "0.01");
    put_default(out, "reference.tau_samples", out.at("reference.tau"));
    put_default(out, "reference.tau_features", out.at("reference.tau"));

    put_default(out, "solver.algorithm", "normalized");
    algorithm_from_string(out.at("solver.algorithm"));
    put_default(out, "solver.alpha", "0.5");
    put_default(out, "solver.gamma_f", "1");
    put_default(out, "solver.gamma_g", "1");
    put_default(out, "solver.tol_residual", "1e-8");
    put_default(out, "solver.max_iters", "500");
    put_default(out, "solver.seed", "0");
    put_default(out, "solver.batch_fraction", "1");
    put_default(out, "solver.jacobi", "false");
    put_default(out, "solver.symmetric_pairs", "true");
    put_default(out, "solver.validate_every", "10");
    put_default(out, "solver.labels_path", "");
    put_default(out, "solver.patience", "10");
    put_default(out, "solver.a0", "reference");
    const std::string a0 = out.at("solver.a0");
    if (a0 != "reference" && a0 != "ones" && a0 != "csv") {
      throw ConfigError("solver.a0 must be reference, ones, or csv");
    }
    if (a0 == "csv" && out.count("solver.a0_path") == 0) {
      throw ConfigError("solver.a0=csv requires solver.a0_path");
    }
  }

  put_default(out, "output.dir", "run");
  put_default(out, "output.heatmap", "false");
  return out;
}

namespace {

Dataset build_dataset(const FlatConfig& cfg) {
  if (cfg.at("data.source") == "synthetic") {
    SyntheticSpec spec;
    spec.n = to_index(cfg, "data.n");
    spec.m = to_index(cfg, "data.m");
    spec.shape = shape_from_string(cfg.at("data.shape"));
    spec.peak_width = to_double(cfg, "data.peak_width");
    return generate_synthetic(spec);
  }
  CsvOptions opts;
  opts.exp_transform = to_bool(cfg, "data.exp_transform");
  opts.transpose = to_bool(cfg, "data.transpose");
  return load_csv(cfg.at("data.path"), opts);
}

ReferenceMatrix build_reference(const FlatConfig& cfg, const Dataset& data,
                                Side side) {
  const double tau = to_double(cfg, side == Side::Samples
                                        ? "reference.tau_samples"
                                        : "reference.tau_features");
  if (cfg.at("reference.family") == "scaled_l1") {
    return ReferenceMatrix::scaled_l1_pairwise(data, side, tau);
  }
  return ReferenceMatrix::scaled_identity(data.count(side), tau);
}

double min_eigenvalue(const Matrix& m) {
  Eigen::SelfAdjointEigenSolver<Matrix> eig(m);
  if (eig.info() != Eigen::Success) return 0.0;
  return eig.eigenvalues().minCoeff();
}

struct BuiltMaps {
  std::unique_ptr<GroundMetricMap> f;
  std::unique_ptr<GroundMetricMap> g;
};

BuiltMaps build_maps(const FlatConfig& cfg, const Dataset& data) {
  const std::string family = cfg.at("method.family");
  ReferenceMatrix ref_samples = build_reference(cfg, data, Side::Samples);
  ReferenceMatrix ref_features = build_reference(cfg, data, Side::Features);

  BuiltMaps maps;
  if (family == "exact_ot" || family == "sinkhorn") {
    SinkhornParams params;
    bool warm = false;
    OtVariant variant = OtVariant::Exact;
    if (family == "sinkhorn") {
      variant = OtVariant::Sinkhorn;
      params.epsilon = to_double(cfg, "method.epsilon");
      params.marginal_tol = to_double(cfg, "method.marginal_tol");
      params.max_sweeps = to_index(cfg, "method.max_sweeps");
      params.log_domain = to_bool(cfg, "method.log_domain");
      warm = to_bool(cfg, "method.warm_start");
    }
    maps.f = std::make_unique<OtGroundMap>(data, Side::Samples, variant,
                                           std::move(ref_samples), params, warm);
    maps.g = std::make_unique<OtGroundMap>(data, Side::Features, variant,
                                           std::move(ref_features), params, warm);
    return maps;
  }
  if (family == "mahalanobis") {
    const std::string kernel_name = cfg.at("method.kernel");
    const double param = to_double(cfg, "method.kernel_param");
    RadialKernel kernel = kernel_name == "gaussian"
                              ? RadialKernel::gaussian(param)
                              : kernel_name == "inverse_multiquadric"
                                    ? RadialKernel::inverse_multiquadric(param)
                                    : RadialKernel::laplacian(param);
    // Admissible inputs of each map dominate the opposite side's reference,
    // whose smallest eigenvalue floors the quadratic forms (the Laplacian
    // kernel's certificate needs that floor to be positive).
    const double floor_f = min_eigenvalue(ref_features.entries());
    const double floor_g = min_eigenvalue(ref_samples.entries());
    maps.f = std::make_unique<KernelGroundMap>(data, Side::Samples, kernel,
                                               std::move(ref_samples), floor_f);
    maps.g = std::make_unique<KernelGroundMap>(data, Side::Features, kernel,
                                               std::move(ref_features), floor_g);
    return maps;
  }
  throw ConfigError("no coupled maps for family " + family);
}

SolverConfig build_solver_config(const FlatConfig& cfg) {
  SolverConfig sc;
  sc.algorithm = algorithm_from_string(cfg.at("solver.algorithm"));
  sc.alpha = to_double(cfg, "solver.alpha");
  sc.gamma_f = to_double(cfg, "solver.gamma_f");
  sc.gamma_g = to_double(cfg, "solver.gamma_g");
  sc.tol_residual = to_double(cfg, "solver.tol_residual");
  sc.max_iters = to_index(cfg, "solver.max_iters");
  sc.seed = to_u64(cfg, "solver.seed");
  sc.batch_fraction = to_double(cfg, "solver.batch_fraction");
  sc.jacobi = to_bool(cfg, "solver.jacobi");
  sc.symmetric_pairs = to_bool(cfg, "solver.symmetric_pairs");
  sc.validate_every = to_index(cfg, "solver.validate_every");
  const std::string labels_path = cfg.at("solver.labels_path");
  if (!labels_path.empty()) {
    EarlyStopConfig es;
    es.labels = load_labels(labels_path);
    es.patience = to_index(cfg, "solver.patience");
    sc.early_stop = std::move(es);
  }
  return sc;
}

std::string csv_cell(double v) {
  if (std::isnan(v)) return "";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return format_double(v);
}

json json_number(double v) {
  if (std::isnan(v)) return nullptr;
  if (std::isinf(v)) return v > 0 ? json("inf") : json("-inf");
  return v;
}

json contraction_to_json(const ContractionReport& c) {
  json j;
  j["alpha"] = c.alpha;
  j["gamma_f"] = c.gamma_f;
  j["gamma_g"] = c.gamma_g;
  if (c.l_f) j["l_f"] = *c.l_f;
  if (c.l_g) j["l_g"] = *c.l_g;
  if (c.l_t) j["l_t"] = *c.l_t;
  if (c.relaxed_condition) j["relaxed_condition"] = *c.relaxed_condition;
  if (c.c_f) j["c_f"] = *c.c_f;
  if (c.c_g) j["c_g"] = *c.c_g;
  if (c.l_t_normalized) j["l_t_normalized"] = *c.l_t_normalized;
  if (c.normalized_condition) j["normalized_condition"] = *c.normalized_condition;
  if (c.normalized_condition_quarter) {
    j["normalized_condition_quarter"] = *c.normalized_condition_quarter;
  }
  return j;
}

void write_report_json(const std::string& path, const FlatConfig& resolved,
                       const ExperimentOutcome& outcome) {
  json j;
  j["version"] = kVersion;
  j["config"] = resolved;
  if (outcome.run) {
    const RunReport& r = *outcome.run;
    json run;
    run["verdict"] = to_string(r.verdict);
    run["iterations"] = static_cast<long long>(r.iterations);
    run["wall_seconds"] = r.wall_seconds;
    if (!r.message.empty()) run["message"] = r.message;
    if (!r.trace.empty()) {
      run["final_residual_a"] = json_number(r.trace.back().residual_a);
      run["final_residual_b"] = json_number(r.trace.back().residual_b);
    }
    run["contraction"] = contraction_to_json(r.contraction);
    if (r.best_asw) {
      run["best_iteration"] = static_cast<long long>(r.best_iteration);
      run["best_asw"] = *r.best_asw;
    }
    j["run"] = run;
  }
  if (outcome.laplacian) {
    const LaplacianOutcome& l = *outcome.laplacian;
    json lap;
    lap["lambda"] = l.lambda;
    lap["lambda_f"] = l.lambda_f;
    lap["lambda_g"] = l.lambda_g;
    lap["power_residual"] = l.power_residual;
    lap["power_iterations"] = static_cast<long long>(l.power_iterations);
    lap["eigen_residual"] = l.eigen_residual;
    lap["entrywise_positive"] = l.entrywise_positive;
    lap["metric_check_ok"] = l.metric_check_ok;
    lap["genericity"] = l.genericity_summary;
    j["laplacian"] = lap;
  }
  if (outcome.metric_asw) j["metrics"]["asw"] = *outcome.metric_asw;
  if (outcome.metric_dunn) j["metrics"]["dunn"] = json_number(*outcome.metric_dunn);
  j["exit_code"] = outcome.exit_code;

  std::ofstream out(path);
  if (!out) throw ParseError("cannot write file: " + path);
  out << j.dump(2) << '\n';
}

}  // namespace

void write_trace_csv(const std::string& path, const RunReport& report) {
  std::ofstream out(path);
  if (!out) throw ParseError("cannot write file: " + path);
  const bool with_asw = report.config.early_stop.has_value();
  const bool with_ref =
      !report.trace.empty() && report.trace.front().ref_sq_dist.has_value();
  out << "iteration,residual_a,residual_b,hilbert_a,gamma_f,gamma_g";
  if (with_asw) out << ",asw";
  if (with_ref) out << ",ref_sq_dist";
  out << '\n';
  for (const TraceRow& row : report.trace) {
    out << row.iteration << ',' << csv_cell(row.residual_a) << ','
        << csv_cell(row.residual_b) << ',' << csv_cell(row.hilbert_a) << ','
        << csv_cell(row.gamma_f) << ',' << csv_cell(row.gamma_g);
    if (with_asw) out << ',' << (row.asw ? csv_cell(*row.asw) : "");
    if (with_ref) out << ',' << (row.ref_sq_dist ? csv_cell(*row.ref_sq_dist) : "");
    out << '\n';
  }
  if (!out) throw ParseError("write failed: " + path);
}

void write_heatmap_svg(const std::string& path, const Matrix& mat) {
  const Index rows = mat.rows();
  const Index cols = mat.cols();
  if (rows < 1 || cols < 1) throw InvalidMatrix("heatmap needs a nonempty matrix");
  const double top = mat.maxCoeff();
  std::ofstream out(path);
  if (!out) throw ParseError("cannot write file: " + path);
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << cols * 8
      << "\" height=\"" << rows * 8 << "\" viewBox=\"0 0 " << cols << ' '
      << rows << "\" shape-rendering=\"crispEdges\">\n";
  char buf[32];
  for (Index i = 0; i < rows; ++i) {
    for (Index j = 0; j < cols; ++j) {
      double t = top > 0.0 ? mat(i, j) / top : 0.0;
      t = std::min(1.0, std::max(0.0, t));
      const int gray = static_cast<int>(std::lround(255.0 * (1.0 - t)));
      std::snprintf(buf, sizeof(buf), "#%02x%02x%02x", gray, gray, gray);
      out << "<rect x=\"" << j << "\" y=\"" << i << "\" width=\"1\" height=\"1\""
          << " fill=\"" << buf << "\"/>\n";
    }
  }
  out << "</svg>\n";
  if (!out) throw ParseError("write failed: " + path);
}

FlatConfig config_from_report(const std::string& report_path) {
  std::ifstream in(report_path);
  if (!in) throw ParseError("cannot open report: " + report_path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw ParseError(report_path + ": invalid JSON: " + e.what());
  }
  if (!j.contains("config") || !j["config"].is_object()) {
    throw ParseError(report_path + ": no config object");
  }
  FlatConfig cfg;
  for (const auto& [key, value] : j["config"].items()) {
    if (!value.is_string()) {
      throw ParseError(report_path + ": config values must be strings");
    }
    cfg[key] = value.get<std::string>();
  }
  return cfg;
}

namespace {

void run_laplacian_family(const FlatConfig& cfg, const Dataset& data,
                          const std::filesystem::path& dir,
                          ExperimentOutcome& outcome) {
  PerronSystem sys = assemble_perron_matrix(
      data, to_index(cfg, "method.cross_check_limit"));
  solve_perron(sys, to_double(cfg, "method.power_tol"),
               to_index(cfg, "method.power_max_iters"));

  LaplacianOutcome lap;
  lap.lambda = sys.lambda;
  if (cfg.count("method.lambda_f") > 0 && !cfg.at("method.lambda_f").empty()) {
    lap.lambda_f = to_double(cfg, "method.lambda_f");
    if (!(lap.lambda_f > 0.0)) throw ConfigError("method.lambda_f must be positive");
    lap.lambda_g = sys.lambda / lap.lambda_f;
  } else {
    lap.lambda_f = std::sqrt(sys.lambda);
    lap.lambda_g = lap.lambda_f;
  }
  lap.power_residual = sys.residual;
  lap.power_iterations = sys.iterations;
  lap.entrywise_positive = sys.entrywise_positive;
  lap.genericity_summary = sys.genericity.summary();

  const CostMatrix a = reconstruct_ground_matrix(sys.v, data.m());
  LaplacianGroundMap f(data, Side::Samples);
  LaplacianGroundMap g(data, Side::Features);
  const Matrix b = f.apply(a.entries()) / lap.lambda_f;
  const Matrix composed = g.apply(f.apply(a.entries()));
  lap.eigen_residual = max_norm(composed - sys.lambda * a.entries()) / sys.lambda;

  const ValidationReport metric_report = metric_matrix_check(a.entries(), data);
  lap.metric_check_ok = metric_report.ok;

  Matrix distances(data.n(), data.n());
  for (Index i = 0; i < data.n(); ++i) {
    distances(i, i) = 0.0;
    for (Index j = i + 1; j < data.n(); ++j) {
      const double value =
          mahalanobis_distance(a.entries(), data.sample(i), data.sample(j));
      distances(i, j) = value;
      distances(j, i) = value;
    }
  }

  save_csv((dir / "A.csv").string(), a.entries());
  save_csv((dir / "B.csv").string(), b);
  save_csv((dir / "distances.csv").string(), distances);
  if (to_bool(cfg, "output.heatmap")) {
    write_heatmap_svg((dir / "distances_heatmap.svg").string(), distances);
  }
  outcome.laplacian = lap;
  outcome.exit_code = 0;
}

void run_solver_family(const FlatConfig& cfg, const Dataset& data,
                       const std::filesystem::path& dir,
                       ExperimentOutcome& outcome) {
  BuiltMaps maps = build_maps(cfg, data);
  SolverConfig sc = build_solver_config(cfg);

  Matrix a0;
  const std::string a0_kind = cfg.at("solver.a0");
  if (a0_kind == "reference") {
    a0 = default_initial_matrix(*maps.f, *maps.g);
  } else if (a0_kind == "ones") {
    const Index m = maps.f->input_dim();
    a0 = Matrix::Ones(m, m) - Matrix::Identity(m, m);
  } else {
    a0 = load_csv_matrix(cfg.at("solver.a0_path"));
  }

  RunReport report = solve(*maps.f, *maps.g, sc, a0);

  save_csv((dir / "A.csv").string(), report.a);
  save_csv((dir / "B.csv").string(), report.b);
  write_trace_csv((dir / "trace.csv").string(), report);
  if (report.best_a) {
    save_csv((dir / "best_A.csv").string(), *report.best_a);
    save_csv((dir / "best_B.csv").string(), *report.best_b);
  }
  if (to_bool(cfg, "output.heatmap")) {
    write_heatmap_svg((dir / "B_heatmap.svg").string(), report.b);
  }

  if (sc.early_stop) {
    const LabeledDistances ld{report.b, sc.early_stop->labels};
    outcome.metric_asw = asw(ld);
    outcome.metric_dunn = dunn_index(ld);
  }
  switch (report.verdict) {
    case Verdict::Converged:
    case Verdict::EarlyStopped: outcome.exit_code = 0; break;
    case Verdict::MaxIters: outcome.exit_code = 3; break;
    case Verdict::Diverged: outcome.exit_code = 4; break;
  }
  outcome.run = std::move(report);
}

}  // namespace

ExperimentOutcome run_experiment(const FlatConfig& cfg) {
  ExperimentOutcome outcome;
  outcome.resolved = resolve_config(cfg);
  set_default_jobs(static_cast<int>(to_index(outcome.resolved, "jobs")));

  const Dataset data = build_dataset(outcome.resolved);
  const std::filesystem::path dir(outcome.resolved.at("output.dir"));
  std::filesystem::create_directories(dir);
  outcome.dir = dir.string();

  if (outcome.resolved.at("method.family") == "graph_laplacian") {
    run_laplacian_family(outcome.resolved, data, dir, outcome);
  } else {
    run_solver_family(outcome.resolved, data, dir, outcome);
  }
  write_report_json((dir / "report.json").string(), outcome.resolved, outcome);
  return outcome;
}

}  // namespace mel
