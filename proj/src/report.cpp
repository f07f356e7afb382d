// Report and config serialization for the experiment harness.

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "jsr/bench.hpp"

namespace jsr::bench {

namespace {

using nlohmann::json;

// ---- CSV helpers -----------------------------------------------------------

std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += "\"\"";
    else out += c;
  }
  out += "\"";
  return out;
}

std::string fmt_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

// Splits one CSV record (no embedded newlines in our writers' numeric
// fields; termination messages may carry commas, hence the quoting).
std::vector<std::string> csv_split(const std::string& line) {
  std::vector<std::string> fields;
  std::string cur;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          cur += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        cur += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  fields.push_back(cur);
  return fields;
}

// ---- JSON mapping ----------------------------------------------------------

std::string kind_name(SolverKind k) {
  switch (k) {
    case SolverKind::AdmmL20: return "admm_l20";
    case SolverKind::AdmmL21: return "admm_l21";
    case SolverKind::Somp: return "somp";
    case SolverKind::Sniht: return "sniht";
  }
  return "?";
}

json sparsity_to_json(const SparsityRule& r) {
  switch (r.mode) {
    case SparsityMode::KPlus: return json{{"mode", "k_plus"}, {"offset", r.offset}};
    case SparsityMode::Fixed: return json{{"mode", "fixed"}, {"value", r.value}};
    case SparsityMode::Budget: return json{{"mode", "budget"}};
  }
  return json();
}

SparsityRule sparsity_from_json(const json& j) {
  SparsityRule r;
  if (j.is_number_integer() || j.is_number_unsigned()) {
    r.mode = SparsityMode::Fixed;
    r.value = j.get<std::size_t>();
    return r;
  }
  if (!j.is_object() || !j.contains("mode"))
    throw std::invalid_argument("config: solver field 's' must be an integer or an object "
                                "with a 'mode'");
  const std::string mode = j.at("mode").get<std::string>();
  if (mode == "k_plus") {
    r.mode = SparsityMode::KPlus;
    r.offset = j.value("offset", std::int64_t{2});
  } else if (mode == "fixed") {
    r.mode = SparsityMode::Fixed;
    if (!j.contains("value"))
      throw std::invalid_argument("config: sparsity mode 'fixed' needs a 'value'");
    r.value = j.at("value").get<std::size_t>();
  } else if (mode == "budget") {
    r.mode = SparsityMode::Budget;
  } else {
    throw std::invalid_argument("config: unknown sparsity mode '" + mode + "'");
  }
  return r;
}

json solver_to_json(const SolverSetup& s) {
  json j{{"name", kind_name(s.kind)}, {"label", s.label}, {"max_iter", s.max_iter}};
  switch (s.kind) {
    case SolverKind::AdmmL20:
      j["backend"] = s.backend == Backend::Smw ? "smw" : "plain";
      j["rho"] = s.rho;
      j["s"] = sparsity_to_json(s.sparsity);
      j["criterion"] = s.criterion_enabled;
      j["eps_primal"] = s.eps_primal;
      j["eps_change"] = s.eps_change;
      j["eps_dual"] = s.eps_dual;
      break;
    case SolverKind::AdmmL21:
      j["lambda"] = s.lambda;
      j["rho"] = s.l21_rho;
      j["criterion"] = s.criterion_enabled;
      j["eps_primal"] = s.eps_primal;
      j["eps_change"] = s.eps_change;
      j["eps_dual"] = s.eps_dual;
      break;
    case SolverKind::Somp:
    case SolverKind::Sniht:
      break;
  }
  return j;
}

SolverSetup solver_from_json(const json& j) {
  if (!j.is_object() || !j.contains("name"))
    throw std::invalid_argument("config: each solver entry needs a 'name'");
  std::string name = j.at("name").get<std::string>();
  SolverSetup s;
  if (name == "admm_l20" || name == "admm_l20_smw") {
    s.kind = SolverKind::AdmmL20;
    s.backend = name == "admm_l20_smw" ? Backend::Smw : Backend::Plain;
    if (j.contains("backend")) {
      const std::string b = j.at("backend").get<std::string>();
      if (b == "plain") s.backend = Backend::Plain;
      else if (b == "smw") s.backend = Backend::Smw;
      else throw std::invalid_argument("config: unknown backend '" + b + "'");
    }
    if (name == "admm_l20" && s.backend == Backend::Smw) name = "admm_l20_smw";
    s.rho = j.value("rho", 1.0);
    if (j.contains("s")) s.sparsity = sparsity_from_json(j.at("s"));
  } else if (name == "admm_l21") {
    s.kind = SolverKind::AdmmL21;
    s.lambda = j.value("lambda", 1e-6);
    s.l21_rho = j.value("rho", 1e-5);
  } else if (name == "somp") {
    s.kind = SolverKind::Somp;
  } else if (name == "sniht") {
    s.kind = SolverKind::Sniht;
  } else {
    throw std::invalid_argument("config: unknown solver name '" + name +
                                "' (available: admm_l20, admm_l20_smw, admm_l21, somp, sniht)");
  }
  s.label = j.value("label", name);
  s.max_iter = j.value("max_iter", std::size_t{1000});
  s.criterion_enabled = j.value("criterion", true);
  s.eps_primal = j.value("eps_primal", 1e-6);
  s.eps_change = j.value("eps_change", 1e-6);
  s.eps_dual = j.value("eps_dual", 1e-6);
  if (s.max_iter == 0) throw std::invalid_argument("config: max_iter must be positive");
  return s;
}

std::vector<std::size_t> axis_from_json(const json& j, const char* axis) {
  std::vector<std::size_t> vals;
  if (j.is_number_integer() || j.is_number_unsigned()) {
    vals.push_back(j.get<std::size_t>());
  } else if (j.is_array() && !j.empty()) {
    for (const auto& v : j) {
      if (!v.is_number_integer() && !v.is_number_unsigned())
        throw std::invalid_argument(std::string("config: grid axis '") + axis +
                                    "' must hold integers");
      vals.push_back(v.get<std::size_t>());
    }
  } else {
    throw std::invalid_argument(std::string("config: grid axis '") + axis +
                                "' must be an integer or a non-empty integer list");
  }
  return vals;
}

GridTemplate template_from_json(const json& j) {
  if (!j.is_object())
    throw std::invalid_argument("config: each grid template must be an object");
  for (const char* axis : {"N", "M", "K", "J"})
    if (!j.contains(axis))
      throw std::invalid_argument(std::string("config: grid template is missing axis '") +
                                  axis + "'");
  GridTemplate t;
  t.N = axis_from_json(j.at("N"), "N");
  t.M = axis_from_json(j.at("M"), "M");
  t.K = axis_from_json(j.at("K"), "K");
  t.J = axis_from_json(j.at("J"), "J");
  return t;
}

json template_to_json(const GridTemplate& t) {
  return json{{"N", t.N}, {"M", t.M}, {"K", t.K}, {"J", t.J}};
}

ExperimentSpec spec_from_json(const json& j) {
  if (!j.is_object()) throw std::invalid_argument("config: top level must be an object");
  ExperimentSpec spec;
  spec.name = j.value("name", std::string("experiment"));
  if (!j.contains("grid")) throw std::invalid_argument("config: missing 'grid'");
  const json& grid = j.at("grid");
  if (grid.is_object()) {
    spec.grid.push_back(template_from_json(grid));
  } else if (grid.is_array() && !grid.empty()) {
    for (const auto& t : grid) spec.grid.push_back(template_from_json(t));
  } else {
    throw std::invalid_argument("config: 'grid' must be an object or a non-empty array");
  }
  if (!j.contains("solvers") || !j.at("solvers").is_array() || j.at("solvers").empty())
    throw std::invalid_argument("config: 'solvers' must be a non-empty array");
  for (const auto& s : j.at("solvers")) spec.solvers.push_back(solver_from_json(s));
  if (j.contains("trials") && !j.at("trials").is_number_unsigned() &&
      !j.at("trials").is_number_integer())
    throw std::invalid_argument("config: 'trials' must be an integer");
  spec.trials = j.value("trials", std::size_t{100});
  if (spec.trials == 0) throw std::invalid_argument("config: 'trials' must be positive");
  spec.base_seed = j.value("base_seed", std::uint64_t{1});
  if (j.contains("success_threshold") && !j.at("success_threshold").is_number())
    throw std::invalid_argument("config: 'success_threshold' must be a number");
  spec.success_threshold = j.value("success_threshold", 1e-5);
  if (!(spec.success_threshold > 0.0))
    throw std::invalid_argument("config: 'success_threshold' must be positive");
  return spec;
}

json spec_to_json(const ExperimentSpec& spec) {
  json grid = json::array();
  for (const auto& t : spec.grid) grid.push_back(template_to_json(t));
  json solvers = json::array();
  for (const auto& s : spec.solvers) solvers.push_back(solver_to_json(s));
  return json{{"name", spec.name},
              {"grid", grid},
              {"solvers", solvers},
              {"trials", spec.trials},
              {"base_seed", spec.base_seed},
              {"success_threshold", spec.success_threshold}};
}

json double_or_null(double v) {
  if (std::isfinite(v)) return v;
  return nullptr;  // JSON has no NaN; null round-trips back to NaN
}

double double_from(const json& j) {
  if (j.is_null()) return std::numeric_limits<double>::quiet_NaN();
  return j.get<double>();
}

json record_to_json(const TrialRecord& r) {
  return json{{"instance_id", r.instance_id},
              {"solver", r.solver},
              {"N", r.N},
              {"M", r.M},
              {"K", r.K},
              {"J", r.J},
              {"seed", r.seed},
              {"trial", r.trial},
              {"rmse", double_or_null(r.rmse)},
              {"success", r.success},
              {"iterations", r.iterations},
              {"time_s", double_or_null(r.time_s)},
              {"termination", r.termination}};
}

TrialRecord record_from_json(const json& j) {
  TrialRecord r;
  r.instance_id = j.at("instance_id").get<std::string>();
  r.solver = j.at("solver").get<std::string>();
  r.N = j.at("N").get<std::size_t>();
  r.M = j.at("M").get<std::size_t>();
  r.K = j.at("K").get<std::size_t>();
  r.J = j.at("J").get<std::size_t>();
  r.seed = j.at("seed").get<std::uint64_t>();
  r.trial = j.at("trial").get<std::size_t>();
  r.rmse = double_from(j.at("rmse"));
  r.success = j.at("success").get<bool>();
  r.iterations = j.at("iterations").get<std::size_t>();
  r.time_s = double_from(j.at("time_s"));
  r.termination = j.at("termination").get<std::string>();
  return r;
}

json aggregate_to_json(const AggregateRow& a) {
  return json{{"solver", a.solver},
              {"N", a.N},
              {"M", a.M},
              {"K", a.K},
              {"J", a.J},
              {"trials", a.trials},
              {"success_rate", a.success_rate},
              {"mean_rmse", double_or_null(a.mean_rmse)},
              {"std_rmse", double_or_null(a.std_rmse)},
              {"mean_time_s", a.mean_time_s},
              {"std_time_s", a.std_time_s}};
}

AggregateRow aggregate_from_json(const json& j) {
  AggregateRow a;
  a.solver = j.at("solver").get<std::string>();
  a.N = j.at("N").get<std::size_t>();
  a.M = j.at("M").get<std::size_t>();
  a.K = j.at("K").get<std::size_t>();
  a.J = j.at("J").get<std::size_t>();
  a.trials = j.at("trials").get<std::size_t>();
  a.success_rate = j.at("success_rate").get<double>();
  a.mean_rmse = double_from(j.at("mean_rmse"));
  a.std_rmse = double_from(j.at("std_rmse"));
  a.mean_time_s = j.at("mean_time_s").get<double>();
  a.std_time_s = j.at("std_time_s").get<double>();
  return a;
}

json instance_to_json(const InstanceNote& n) {
  return json{{"instance_id", n.instance_id},
              {"N", n.N},
              {"M", n.M},
              {"K", n.K},
              {"J", n.J},
              {"seed", n.seed},
              {"uniqueness_bound", n.uniqueness_bound}};
}

InstanceNote instance_from_json(const json& j) {
  InstanceNote n;
  n.instance_id = j.at("instance_id").get<std::string>();
  n.N = j.at("N").get<std::size_t>();
  n.M = j.at("M").get<std::size_t>();
  n.K = j.at("K").get<std::size_t>();
  n.J = j.at("J").get<std::size_t>();
  n.seed = j.at("seed").get<std::uint64_t>();
  n.uniqueness_bound = j.at("uniqueness_bound").get<bool>();
  return n;
}

}  // namespace

ExperimentSpec parse_spec_text(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw std::invalid_argument(std::string("config: invalid JSON: ") + e.what());
  }
  return spec_from_json(j);
}

ExperimentSpec load_spec(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("load_spec: cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_spec_text(ss.str());
}

std::string spec_to_json_text(const ExperimentSpec& spec) {
  return spec_to_json(spec).dump(2);
}

std::vector<std::string> emit_report(const ExperimentResult& result, ReportFormat format,
                                     const std::string& out_dir) {
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(out_dir, ec);
  const std::string base =
      (fs::path(out_dir) / (result.spec.name.empty() ? "experiment" : result.spec.name))
          .string();
  std::vector<std::string> written;

  if (format == ReportFormat::Csv) {
    {
      const std::string path = base + "_trials.csv";
      std::ofstream out(path);
      if (!out) throw std::runtime_error("emit_report: cannot open " + path);
      out << "instance_id,solver,N,M,K,J,seed,rmse,success,iterations,time_s,termination\n";
      for (const auto& r : result.records) {
        out << csv_escape(r.instance_id) << ',' << csv_escape(r.solver) << ',' << r.N << ','
            << r.M << ',' << r.K << ',' << r.J << ',' << r.seed << ',' << fmt_double(r.rmse)
            << ',' << (r.success ? "true" : "false") << ',' << r.iterations << ','
            << fmt_double(r.time_s) << ',' << csv_escape(r.termination) << '\n';
      }
      if (!out) throw std::runtime_error("emit_report: write failed for " + path);
      written.push_back(path);
    }
    {
      const std::string path = base + "_aggregates.csv";
      std::ofstream out(path);
      if (!out) throw std::runtime_error("emit_report: cannot open " + path);
      out << "solver,N,M,K,J,trials,success_rate,mean_rmse,std_rmse,mean_time_s,std_time_s\n";
      for (const auto& a : result.aggregates) {
        out << csv_escape(a.solver) << ',' << a.N << ',' << a.M << ',' << a.K << ',' << a.J
            << ',' << a.trials << ',' << fmt_double(a.success_rate) << ','
            << fmt_double(a.mean_rmse) << ',' << fmt_double(a.std_rmse) << ','
            << fmt_double(a.mean_time_s) << ',' << fmt_double(a.std_time_s) << '\n';
      }
      if (!out) throw std::runtime_error("emit_report: write failed for " + path);
      written.push_back(path);
    }
    return written;
  }

  json j{{"name", result.spec.name}, {"spec", spec_to_json(result.spec)}};
  json instances = json::array();
  for (const auto& n : result.instances) instances.push_back(instance_to_json(n));
  json records = json::array();
  for (const auto& r : result.records) records.push_back(record_to_json(r));
  json aggregates = json::array();
  for (const auto& a : result.aggregates) aggregates.push_back(aggregate_to_json(a));
  j["instances"] = std::move(instances);
  j["records"] = std::move(records);
  j["aggregates"] = std::move(aggregates);

  const std::string path = base + "_report.json";
  std::ofstream out(path);
  if (!out) throw std::runtime_error("emit_report: cannot open " + path);
  out << j.dump(2) << "\n";
  if (!out) throw std::runtime_error("emit_report: write failed for " + path);
  written.push_back(path);
  return written;
}

ExperimentResult load_report_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("load_report_json: cannot open " + path);
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw std::runtime_error("load_report_json: invalid JSON in " + path + ": " + e.what());
  }
  ExperimentResult result;
  result.spec = spec_from_json(j.at("spec"));
  for (const auto& n : j.at("instances")) result.instances.push_back(instance_from_json(n));
  for (const auto& r : j.at("records")) result.records.push_back(record_from_json(r));
  for (const auto& a : j.at("aggregates")) result.aggregates.push_back(aggregate_from_json(a));
  return result;
}

std::vector<TrialRecord> read_trials_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("read_trials_csv: cannot open " + path);
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("read_trials_csv: empty file " + path);
  std::vector<TrialRecord> records;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto f = csv_split(line);
    if (f.size() != 12)
      throw std::runtime_error("read_trials_csv: bad field count in " + path);
    TrialRecord r;
    r.instance_id = f[0];
    r.solver = f[1];
    r.N = std::stoull(f[2]);
    r.M = std::stoull(f[3]);
    r.K = std::stoull(f[4]);
    r.J = std::stoull(f[5]);
    r.seed = std::stoull(f[6]);
    r.rmse = std::strtod(f[7].c_str(), nullptr);
    r.success = f[8] == "true" || f[8] == "1";
    r.iterations = std::stoull(f[9]);
    r.time_s = std::strtod(f[10].c_str(), nullptr);
    r.termination = f[11];
    // trial index is recoverable from the instance id (-t<k>- segment)
    const auto pos = r.instance_id.rfind("-t");
    if (pos != std::string::npos) r.trial = std::strtoull(r.instance_id.c_str() + pos + 2, nullptr, 10);
    records.push_back(std::move(r));
  }
  return records;
}

}  // namespace jsr::bench
