#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "mel/data.hpp"
#include "mel/errors.hpp"
#include "mel/eval.hpp"
#include "mel/experiment.hpp"
#include "mel/runtime.hpp"

namespace {

using nlohmann::json;

int cmd_generate(const std::string& shape, mel::Index n, mel::Index m,
                 double peak_width, const std::string& out) {
  mel::SyntheticSpec spec;
  spec.shape = mel::shape_from_string(shape);
  spec.n = n;
  spec.m = m;
  spec.peak_width = peak_width;
  const mel::Matrix x = mel::synthetic_matrix(spec);
  mel::save_csv(out, x);
  std::cout << "wrote " << x.rows() << " samples x " << x.cols()
            << " features (" << shape << ") to " << out << "\n";
  return 0;
}

int cmd_learn(const std::string& config_path, const std::string& rerun_path,
              const std::vector<std::string>& overrides,
              const std::string& out_dir, int jobs) {
  mel::FlatConfig cfg;
  if (!rerun_path.empty()) {
    cfg = mel::config_from_report(rerun_path);
  } else if (!config_path.empty()) {
    cfg = mel::parse_config_file(config_path);
  }
  for (const std::string& kv : overrides) mel::apply_override(cfg, kv);
  if (!out_dir.empty()) cfg["output.dir"] = out_dir;
  if (jobs > 0) cfg["jobs"] = std::to_string(jobs);

  const mel::ExperimentOutcome outcome = mel::run_experiment(cfg);
  std::cout << "run directory: " << outcome.dir << "\n";
  if (outcome.run) {
    const mel::RunReport& r = *outcome.run;
    std::cout << "verdict: " << mel::to_string(r.verdict) << " after "
              << r.iterations << " iterations";
    if (!r.trace.empty()) {
      std::cout << " (final residual_a " << r.trace.back().residual_a << ")";
    }
    std::cout << "\n";
    if (!r.message.empty()) std::cout << "note: " << r.message << "\n";
    if (r.best_asw) {
      std::cout << "best silhouette " << *r.best_asw << " at iteration "
                << r.best_iteration << "\n";
    }
  }
  if (outcome.laplacian) {
    const mel::LaplacianOutcome& l = *outcome.laplacian;
    std::cout << "leading eigenvalue " << l.lambda << " (split " << l.lambda_f
              << " x " << l.lambda_g << "), eigen residual "
              << l.eigen_residual << "\n";
    std::cout << "metric matrix check: " << (l.metric_check_ok ? "ok" : "FAILED")
              << "\n";
  }
  return outcome.exit_code;
}

int cmd_eval(const std::string& distances_path, const std::string& labels_path,
             const std::string& out) {
  const mel::Matrix d = mel::load_csv_matrix(distances_path);
  if (d.rows() != d.cols()) {
    throw mel::DimensionMismatch("distance matrix must be square");
  }
  const std::vector<int> labels = mel::load_labels(labels_path);
  const mel::LabeledDistances ld{d, labels};
  const double asw_value = mel::asw(ld);
  const double dunn_value = mel::dunn_index(ld);

  json j;
  j["asw"] = asw_value;
  j["dunn"] = std::isinf(dunn_value) ? json("inf") : json(dunn_value);
  j["n"] = static_cast<long long>(d.rows());
  std::vector<int> sorted = labels;
  std::sort(sorted.begin(), sorted.end());
  j["classes"] = static_cast<long long>(
      std::unique(sorted.begin(), sorted.end()) - sorted.begin());
  const std::string text = j.dump(2);
  std::cout << text << "\n";
  if (!out.empty()) {
    std::ofstream file(out);
    if (!file) throw mel::ParseError("cannot write file: " + out);
    file << text << '\n';
  }
  return 0;
}

int cmd_heatmap(const std::string& input, const std::string& out) {
  const mel::Matrix m = mel::load_csv_matrix(input);
  mel::write_heatmap_svg(out, m);
  std::cout << "wrote " << m.rows() << "x" << m.cols() << " heatmap to " << out
            << "\n";
  return 0;
}

int cmd_report(const std::string& report_path) {
  std::ifstream in(report_path);
  if (!in) throw mel::ParseError("cannot open report: " + report_path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw mel::ParseError(std::string("invalid JSON: ") + e.what());
  }
  std::cout << "version: " << j.value("version", std::string("?")) << "\n";
  if (j.contains("run")) {
    const json& r = j["run"];
    std::cout << "verdict: " << r.value("verdict", std::string("?")) << " after "
              << r.value("iterations", 0LL) << " iterations\n";
    if (r.contains("contraction")) {
      const json& c = r["contraction"];
      if (c.contains("l_t")) {
        std::cout << "relaxed contraction constant " << c["l_t"].dump()
                  << ", condition satisfied: "
                  << c.value("relaxed_condition", false) << "\n";
      }
      if (c.contains("l_t_normalized")) {
        std::cout << "normalized contraction constant "
                  << c["l_t_normalized"].dump() << ", condition satisfied: "
                  << c.value("normalized_condition", false) << "\n";
      }
    }
  }
  if (j.contains("laplacian")) {
    const json& l = j["laplacian"];
    std::cout << "leading eigenvalue " << l["lambda"].dump()
              << ", eigen residual " << l["eigen_residual"].dump() << "\n"
              << "genericity: " << l.value("genericity", std::string("?"))
              << "\n";
  }
  if (j.contains("metrics")) {
    std::cout << "metrics: " << j["metrics"].dump() << "\n";
  }
  std::cout << "config keys: " << (j.contains("config") ? j["config"].size() : 0)
            << " (rerun with: learn --rerun " << report_path << ")\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Coupled ground-metric learning between feature and sample costs"};
  app.require_subcommand(1);

  // generate
  auto* gen = app.add_subcommand("generate", "Write a synthetic translated-histogram CSV");
  std::string gen_shape = "h1";
  mel::Index gen_n = 100, gen_m = 80;
  double gen_width = 400.0;
  std::string gen_out = "data.csv";
  gen->add_option("--shape", gen_shape, "h1, h2, or h3");
  gen->add_option("--n", gen_n, "sample count (rows)");
  gen->add_option("--m", gen_m, "feature count (columns)");
  gen->add_option("--peak-width", gen_width, "bump exponent scale");
  gen->add_option("--out", gen_out, "output CSV path");

  // learn
  auto* learn = app.add_subcommand("learn", "Run a learning experiment");
  std::string learn_config, learn_rerun, learn_out;
  std::vector<std::string> learn_sets;
  int learn_jobs = 0;
  learn->add_option("--config", learn_config, "key=value config file");
  learn->add_option("--rerun", learn_rerun, "report.json of a previous run to reproduce");
  learn->add_option("--set", learn_sets, "config override key=value (repeatable)");
  learn->add_option("--out", learn_out, "run directory (overrides output.dir)");
  learn->add_option("--jobs", learn_jobs,
                    "worker threads for pairwise map evaluation (env "
                    "METRIC_EIGENLEARN_THREADS overrides)");

  // eval
  auto* eval = app.add_subcommand("eval", "Score a distance matrix against labels");
  std::string eval_distances, eval_labels, eval_out = "metrics.json";
  eval->add_option("--distances", eval_distances, "square distance CSV")->required();
  eval->add_option("--labels", eval_labels, "one class id per line")->required();
  eval->add_option("--out", eval_out, "metrics JSON path (empty: stdout only)");

  // heatmap
  auto* heat = app.add_subcommand("heatmap", "Render a matrix CSV as grayscale SVG");
  std::string heat_in, heat_out = "heatmap.svg";
  heat->add_option("--input", heat_in, "matrix CSV")->required();
  heat->add_option("--out", heat_out, "output SVG path");

  // report
  auto* rep = app.add_subcommand("report", "Summarize a run's report.json");
  std::string rep_path;
  rep->add_option("report", rep_path, "path to report.json")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (gen->parsed()) return cmd_generate(gen_shape, gen_n, gen_m, gen_width, gen_out);
    if (learn->parsed()) {
      return cmd_learn(learn_config, learn_rerun, learn_sets, learn_out, learn_jobs);
    }
    if (eval->parsed()) return cmd_eval(eval_distances, eval_labels, eval_out);
    if (heat->parsed()) return cmd_heatmap(heat_in, heat_out);
    if (rep->parsed()) return cmd_report(rep_path);
  } catch (const mel::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const mel::ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return 2;
  } catch (const mel::DimensionMismatch& e) {
    std::cerr << "shape error: " << e.what() << "\n";
    return 2;
  } catch (const mel::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
