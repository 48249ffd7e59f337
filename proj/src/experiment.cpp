#include "thirdq/experiment.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>

#include "thirdq/dynamics.hpp"
#include "thirdq/fit.hpp"
#include "thirdq/linalg.hpp"
#include "thirdq/ness.hpp"
#include "thirdq/spectra.hpp"
#include "thirdq/worker_pool.hpp"

#ifdef THIRDQ_WITH_ORACLE
#include "thirdq/oracle.hpp"
#endif

extern "C" void openblas_set_num_threads(int num_threads);

namespace thirdq::experiment {

namespace {

using nlohmann::json;

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// Typed access to one JSON object with unknown-key detection.
class Reader {
 public:
  Reader(const json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) throw ConfigError(path_ + ": expected an object");
  }

  bool has(const std::string& key) const { return j_.contains(key); }

  const json& raw(const std::string& key) {
    seen_.insert(key);
    return j_.at(key);
  }

  double number(const std::string& key, double fallback) {
    if (!has(key)) return fallback;
    const json& v = raw(key);
    if (!v.is_number()) throw ConfigError(field(key) + ": expected a number");
    const double x = v.get<double>();
    if (!std::isfinite(x)) throw ConfigError(field(key) + ": must be finite");
    return x;
  }

  int integer(const std::string& key, int fallback) {
    if (!has(key)) return fallback;
    const json& v = raw(key);
    if (!v.is_number_integer()) throw ConfigError(field(key) + ": expected an integer");
    return v.get<int>();
  }

  bool boolean(const std::string& key, bool fallback) {
    if (!has(key)) return fallback;
    const json& v = raw(key);
    if (!v.is_boolean()) throw ConfigError(field(key) + ": expected true or false");
    return v.get<bool>();
  }

  std::string text(const std::string& key, const std::string& fallback) {
    if (!has(key)) return fallback;
    const json& v = raw(key);
    if (!v.is_string()) throw ConfigError(field(key) + ": expected a string");
    return v.get<std::string>();
  }

  std::array<double, 4> four(const std::string& key, const std::array<double, 4>& fallback) {
    if (!has(key)) return fallback;
    const json& v = raw(key);
    if (!v.is_array() || v.size() != 4) throw ConfigError(field(key) + ": expected an array of 4 numbers");
    std::array<double, 4> out{};
    for (std::size_t i = 0; i < 4; ++i) {
      if (!v[i].is_number()) throw ConfigError(field(key) + "[" + std::to_string(i) + "]: expected a number");
      out[i] = v[i].get<double>();
    }
    return out;
  }

  std::string field(const std::string& key) const { return path_ + "." + key; }
  const std::string& path() const { return path_; }

  void finish() const {
    for (auto it = j_.begin(); it != j_.end(); ++it)
      if (!seen_.count(it.key())) throw ConfigError(field(it.key()) + ": unknown field");
  }

 private:
  const json& j_;
  std::string path_;
  std::set<std::string> seen_;
};

// {"values": [...]} or {"range": {"start", "stop", "count", "scale": linear|log}}.
std::vector<double> read_values(Reader& r) {
  if (r.has("values") == r.has("range")) throw ConfigError(r.path() + ": give exactly one of values or range");
  std::vector<double> out;
  if (r.has("values")) {
    const json& v = r.raw("values");
    if (!v.is_array()) throw ConfigError(r.field("values") + ": expected an array");
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (!v[i].is_number()) throw ConfigError(r.field("values") + "[" + std::to_string(i) + "]: expected a number");
      out.push_back(v[i].get<double>());
    }
  } else {
    Reader range(r.raw("range"), r.field("range"));
    const double start = range.number("start", kNaN);
    const double stop = range.number("stop", kNaN);
    const int count = range.integer("count", 0);
    const std::string scale = range.text("scale", "linear");
    range.finish();
    if (std::isnan(start) || std::isnan(stop)) throw ConfigError(range.path() + ": start and stop are required");
    if (count < 2) throw ConfigError(range.field("count") + ": must be at least 2");
    if (scale != "linear" && scale != "log") throw ConfigError(range.field("scale") + ": expected linear or log");
    if (scale == "log" && !(start > 0.0 && stop > 0.0)) throw ConfigError(range.path() + ": log range needs positive ends");
    for (int i = 0; i < count; ++i) {
      const double f = static_cast<double>(i) / (count - 1);
      out.push_back(scale == "linear" ? start + f * (stop - start)
                                      : std::exp(std::log(start) + f * (std::log(stop) - std::log(start))));
    }
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::string task_name(Task t) {
  switch (t) {
    case Task::Ness: return "ness";
    case Task::Sweep: return "sweep";
    case Task::GapScaling: return "gap_scaling";
    case Task::Dynamics: return "dynamics";
    case Task::OracleCheck: return "oracle_check";
  }
  return "";
}

bool is_integer_parameter(const std::string& p) { return p == "n"; }

void check_integer_values(const std::vector<double>& values, const std::string& where) {
  for (double v : values)
    if (v != std::floor(v) || v < 2) throw ConfigError(where + ": chain lengths must be integers >= 2");
}

std::vector<double> fit_ys(const std::vector<double>& ys) {
  std::vector<double> out;
  for (double y : ys) out.push_back(std::abs(y));
  return out;
}

json window_fit(const std::string& kind, const std::vector<double>& xs_all, const std::vector<double>& ys_all, bool window,
                double noise_floor) {
  std::size_t begin = 0, end = xs_all.size();
  if (window) {
    const FitWindow w = decay_fit_window(ys_all, noise_floor);
    begin = w.begin;
    end = w.end;
  }
  json out;
  out["window"] = {begin, end};
  std::vector<double> xs, ys;
  for (std::size_t i = begin; i < end; ++i)
    if (std::isfinite(xs_all[i]) && std::isfinite(ys_all[i])) {
      xs.push_back(xs_all[i]);
      ys.push_back(ys_all[i]);
    }
  try {
    if (kind == "power_law") {
      const PowerLawFit f = fit_power_law(xs, fit_ys(ys));
      out["exponent"] = f.exponent;
      out["prefactor"] = f.prefactor;
      out["residual"] = f.residual;
    } else if (kind == "exponential") {
      const ExponentialFit f = fit_exponential(xs, fit_ys(ys));
      out["rate"] = f.rate;
      out["prefactor"] = f.prefactor;
      out["residual"] = f.residual;
    } else {
      const KarevskiFit f = fit_karevski(xs, ys);
      out["a"] = f.a;
      out["b"] = f.b;
      out["residual"] = f.residual;
      out["iterations"] = f.iterations;
    }
  } catch (const Error& e) {
    out["error"] = e.what();
  }
  return out;
}

// ξ from |C(r)| with the windowed exponential fit; NaN when too few points survive.
double correlation_length_rate(const std::vector<double>& decay) {
  std::vector<double> ys = fit_ys(decay);
  const FitWindow w = decay_fit_window(ys);
  std::vector<double> xs, sel;
  for (std::size_t i = w.begin; i < w.end; ++i) {
    xs.push_back(static_cast<double>(i));
    sel.push_back(ys[i]);
  }
  if (xs.size() < 4) return kNaN;
  try {
    return fit_exponential(xs, sel).rate;
  } catch (const Error&) {
    return kNaN;
  }
}

std::string format_number(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

json cell_json(const Cell& c) {
  if (const double* d = std::get_if<double>(&c)) return std::isfinite(*d) ? json(*d) : json(nullptr);
  return std::get<std::string>(c);
}

void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write " + path.string());
  out << content;
}

}  // namespace

std::vector<std::string> sweep_parameters(BathType type) {
  std::vector<std::string> out{"n", "gamma", "h"};
  if (type == BathType::Redfield)
    for (const char* p : {"beta_L", "beta_R", "lambda", "delta_beta"}) out.push_back(p);
  else
    for (const char* p : {"gamma_L1", "gamma_L2", "gamma_R1", "gamma_R2"}) out.push_back(p);
  return out;
}

ExperimentConfig parse_config(const json& j) {
  ExperimentConfig c;
  Reader root(j, "config");
  c.description = root.text("description", "");

  if (root.has("model")) {
    Reader m(root.raw("model"), "model");
    c.model.n = m.integer("n", c.model.n);
    c.model.gamma = m.number("gamma", c.model.gamma);
    c.model.h = m.number("h", c.model.h);
    m.finish();
  }
  if (c.model.n < 2) throw ConfigError("model.n: must be at least 2");

  if (root.has("bath")) {
    Reader b(root.raw("bath"), "bath");
    const std::string type = b.text("type", "redfield");
    if (type == "redfield") {
      c.bath.type = BathType::Redfield;
      c.bath.beta_left = b.number("beta_L", c.bath.beta_left);
      c.bath.beta_right = b.number("beta_R", c.bath.beta_right);
      c.bath.lambda = b.number("lambda", c.bath.lambda);
      c.bath.kappa = b.four("kappa", c.bath.kappa);
      c.bath.theta = b.four("theta", c.bath.theta);
      if (!(c.bath.beta_left > 0.0)) throw ConfigError("bath.beta_L: must be positive");
      if (!(c.bath.beta_right > 0.0)) throw ConfigError("bath.beta_R: must be positive");
      if (c.bath.lambda < 0.0) throw ConfigError("bath.lambda: must be nonnegative");
    } else if (type == "lindblad") {
      c.bath.type = BathType::Lindblad;
      c.bath.rates.gamma_left_1 = b.number("gamma_L1", c.bath.rates.gamma_left_1);
      c.bath.rates.gamma_left_2 = b.number("gamma_L2", c.bath.rates.gamma_left_2);
      c.bath.rates.gamma_right_1 = b.number("gamma_R1", c.bath.rates.gamma_right_1);
      c.bath.rates.gamma_right_2 = b.number("gamma_R2", c.bath.rates.gamma_right_2);
      const std::string form = b.text("form", "operators");
      if (form == "operators")
        c.bath.form = LindbladForm::Operators;
      else if (form == "rates")
        c.bath.form = LindbladForm::Rates;
      else
        throw ConfigError("bath.form: expected operators or rates");
      for (const char* k : {"gamma_L1", "gamma_L2", "gamma_R1", "gamma_R2"})
        if (b.number(k, 0.0) < 0.0) throw ConfigError(b.field(k) + ": must be nonnegative");
    } else {
      throw ConfigError("bath.type: expected redfield or lindblad");
    }
    b.finish();
  }

  const std::string task = root.text("task", "");
  if (task == "ness")
    c.task = Task::Ness;
  else if (task == "sweep")
    c.task = Task::Sweep;
  else if (task == "gap_scaling")
    c.task = Task::GapScaling;
  else if (task == "dynamics")
    c.task = Task::Dynamics;
  else if (task == "oracle_check")
    c.task = Task::OracleCheck;
  else
    throw ConfigError("task: expected one of ness, sweep, gap_scaling, dynamics, oracle_check");

  for (const char* section : {"sweep", "gap_scaling", "dynamics"})
    if (root.has(section) && task_name(c.task) != section)
      throw ConfigError(std::string(section) + ": section given but task is " + task);

  if (c.task == Task::Sweep) {
    if (!root.has("sweep")) throw ConfigError("sweep: required for the sweep task");
    Reader s(root.raw("sweep"), "sweep");
    const auto allowed = sweep_parameters(c.bath.type);
    auto read_axis = [&](Reader& a) {
      Axis axis;
      axis.parameter = a.text("parameter", "");
      if (std::find(allowed.begin(), allowed.end(), axis.parameter) == allowed.end()) {
        std::string list;
        for (const auto& p : allowed) list += (list.empty() ? "" : ", ") + p;
        throw ConfigError(a.field("parameter") + ": unknown sweep parameter '" + axis.parameter + "' (expected one of " +
                          list + ")");
      }
      axis.values = read_values(a);
      if (is_integer_parameter(axis.parameter)) check_integer_values(axis.values, a.path());
      return axis;
    };
    if (s.has("axes")) {
      const json& axes = s.raw("axes");
      if (!axes.is_array() || axes.empty() || axes.size() > 2) throw ConfigError("sweep.axes: expected one or two axes");
      for (std::size_t i = 0; i < axes.size(); ++i) {
        Reader a(axes[i], "sweep.axes[" + std::to_string(i) + "]");
        c.sweep.axes.push_back(read_axis(a));
        a.finish();
      }
      if (c.sweep.axes.size() == 2 && c.sweep.axes[0].parameter == c.sweep.axes[1].parameter)
        throw ConfigError("sweep.axes: the two axes must differ");
    } else {
      c.sweep.axes.push_back(read_axis(s));
    }
    std::size_t points = 1;
    for (const Axis& a : c.sweep.axes) points *= a.values.size();
    if (points < 2) throw ConfigError("sweep: grid needs at least 2 points");
    c.sweep.beta_center = s.number("beta_center", c.sweep.beta_center);
    if (s.has("fits")) {
      const json& fits = s.raw("fits");
      if (!fits.is_array()) throw ConfigError("sweep.fits: expected an array");
      const auto columns = point_columns();
      for (std::size_t i = 0; i < fits.size(); ++i) {
        Reader f(fits[i], "sweep.fits[" + std::to_string(i) + "]");
        FitConfig fc;
        fc.kind = f.text("kind", "");
        if (fc.kind != "power_law" && fc.kind != "exponential" && fc.kind != "karevski")
          throw ConfigError(f.field("kind") + ": expected power_law, exponential or karevski");
        fc.y = f.text("y", "");
        if (std::find(columns.begin(), columns.end(), fc.y) == columns.end())
          throw ConfigError(f.field("y") + ": unknown column '" + fc.y + "'");
        fc.window = f.boolean("window", false);
        fc.noise_floor = f.number("noise_floor", fc.noise_floor);
        f.finish();
        if (c.sweep.axes.size() != 1) throw ConfigError(f.path() + ": fits need a one-dimensional sweep");
        c.sweep.fits.push_back(fc);
      }
    }
    s.finish();
  }

  if (c.task == Task::GapScaling) {
    if (!root.has("gap_scaling")) throw ConfigError("gap_scaling: required for the gap_scaling task");
    Reader g(root.raw("gap_scaling"), "gap_scaling");
    Reader nr(g.raw("n"), "gap_scaling.n");
    const auto ns = read_values(nr);
    nr.finish();
    check_integer_values(ns, "gap_scaling.n");
    if (ns.size() < 4) throw ConfigError("gap_scaling.n: at least 4 chain lengths are needed for the fit");
    for (double n : ns) c.gap_scaling.n_values.push_back(static_cast<int>(n));
    if (g.has("h")) {
      const json& hs = g.raw("h");
      if (!hs.is_array() || hs.empty()) throw ConfigError("gap_scaling.h: expected a nonempty array");
      for (const json& h : hs) {
        if (!h.is_number()) throw ConfigError("gap_scaling.h: expected numbers");
        c.gap_scaling.h_values.push_back(h.get<double>());
      }
    }
    g.finish();
  }

  if (c.task == Task::Dynamics) {
    if (!root.has("dynamics")) throw ConfigError("dynamics: required for the dynamics task");
    Reader d(root.raw("dynamics"), "dynamics");
    if (d.has("indices")) {
      const json& idx = d.raw("indices");
      if (!idx.is_array() || idx.size() != 4) throw ConfigError("dynamics.indices: expected 4 integers");
      for (std::size_t i = 0; i < 4; ++i) {
        if (!idx[i].is_number_integer()) throw ConfigError("dynamics.indices: expected 4 integers");
        const int v = idx[i].get<int>();
        if (v < 0 || v >= 2 * c.model.n) throw ConfigError("dynamics.indices: Majorana index out of range [0, 2n)");
        c.dynamics.indices[i] = v;
      }
    }
    Reader t(d.raw("times"), "dynamics.times");
    c.dynamics.times = read_values(t);
    t.finish();
    for (double x : c.dynamics.times)
      if (x < 0.0) throw ConfigError("dynamics.times: must be nonnegative");
    const std::string unit = d.text("time_unit", "absolute");
    if (unit == "inverse_gap")
      c.dynamics.times_in_inverse_gap = true;
    else if (unit != "absolute")
      throw ConfigError("dynamics.time_unit: expected absolute or inverse_gap");
    if (d.has("drive")) {
      Reader dr(d.raw("drive"), "dynamics.drive");
      DriveConfig drive;
      drive.amplitude = dr.number("amplitude", drive.amplitude);
      drive.frequency = dr.number("frequency", drive.frequency);
      drive.dt = dr.number("dt", drive.dt);
      dr.finish();
      if (!(drive.dt > 0.0)) throw ConfigError("dynamics.drive.dt: must be positive");
      c.dynamics.drive = drive;
    }
    d.finish();
  }

  if (c.task == Task::OracleCheck && c.model.n > 4) throw ConfigError("model.n: oracle_check supports n <= 4");

  if (root.has("output")) {
    Reader o(root.raw("output"), "output");
    c.output.directory = o.text("directory", c.output.directory);
    const std::string format = o.text("format", "csv");
    if (format == "csv")
      c.output.format = Format::Csv;
    else if (format == "json")
      c.output.format = Format::Json;
    else
      throw ConfigError("output.format: expected csv or json");
    o.finish();
  }
  root.finish();
  return c;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path);
  json j;
  try {
    j = json::parse(in);
  } catch (const json::exception& e) {
    throw ConfigError("invalid JSON in " + path + ": " + e.what());
  }
  return parse_config(j);
}

json to_json(const ExperimentConfig& c) {
  json j;
  if (!c.description.empty()) j["description"] = c.description;
  j["model"] = {{"n", c.model.n}, {"gamma", c.model.gamma}, {"h", c.model.h}};
  if (c.bath.type == BathType::Redfield) {
    j["bath"] = {{"type", "redfield"},      {"beta_L", c.bath.beta_left}, {"beta_R", c.bath.beta_right},
                 {"lambda", c.bath.lambda}, {"kappa", c.bath.kappa},      {"theta", c.bath.theta}};
  } else {
    j["bath"] = {{"type", "lindblad"},
                 {"gamma_L1", c.bath.rates.gamma_left_1},
                 {"gamma_L2", c.bath.rates.gamma_left_2},
                 {"gamma_R1", c.bath.rates.gamma_right_1},
                 {"gamma_R2", c.bath.rates.gamma_right_2},
                 {"form", c.bath.form == LindbladForm::Operators ? "operators" : "rates"}};
  }
  j["task"] = task_name(c.task);
  if (c.task == Task::Sweep) {
    json axes = json::array();
    for (const Axis& a : c.sweep.axes) axes.push_back({{"parameter", a.parameter}, {"values", a.values}});
    json fits = json::array();
    for (const FitConfig& f : c.sweep.fits)
      fits.push_back({{"kind", f.kind}, {"y", f.y}, {"window", f.window}, {"noise_floor", f.noise_floor}});
    j["sweep"] = {{"axes", axes}, {"beta_center", c.sweep.beta_center}, {"fits", fits}};
  }
  if (c.task == Task::GapScaling) {
    j["gap_scaling"] = {{"n", {{"values", c.gap_scaling.n_values}}}};
    if (!c.gap_scaling.h_values.empty()) j["gap_scaling"]["h"] = c.gap_scaling.h_values;
  }
  if (c.task == Task::Dynamics) {
    j["dynamics"] = {{"indices", c.dynamics.indices},
                     {"times", {{"values", c.dynamics.times}}},
                     {"time_unit", c.dynamics.times_in_inverse_gap ? "inverse_gap" : "absolute"}};
    if (c.dynamics.drive)
      j["dynamics"]["drive"] = {{"amplitude", c.dynamics.drive->amplitude},
                                {"frequency", c.dynamics.drive->frequency},
                                {"dt", c.dynamics.drive->dt}};
  }
  j["output"] = {{"directory", c.output.directory}, {"format", c.output.format == Format::Csv ? "csv" : "json"}};
  return j;
}

ExperimentConfig with_parameter(const ExperimentConfig& config, const std::string& parameter, double value) {
  ExperimentConfig c = config;
  if (parameter == "n") {
    c.model.n = static_cast<int>(value);
  } else if (parameter == "gamma") {
    c.model.gamma = value;
  } else if (parameter == "h") {
    c.model.h = value;
  } else if (parameter == "beta_L") {
    c.bath.beta_left = value;
  } else if (parameter == "beta_R") {
    c.bath.beta_right = value;
  } else if (parameter == "lambda") {
    c.bath.lambda = value;
  } else if (parameter == "delta_beta") {
    c.bath.beta_left = config.sweep.beta_center - value / 2.0;
    c.bath.beta_right = config.sweep.beta_center + value / 2.0;
  } else if (parameter == "gamma_L1") {
    c.bath.rates.gamma_left_1 = value;
  } else if (parameter == "gamma_L2") {
    c.bath.rates.gamma_left_2 = value;
  } else if (parameter == "gamma_R1") {
    c.bath.rates.gamma_right_1 = value;
  } else if (parameter == "gamma_R2") {
    c.bath.rates.gamma_right_2 = value;
  } else {
    throw ConfigError("unknown parameter '" + parameter + "'");
  }
  return c;
}

ChainParams chain_params(const ExperimentConfig& config) { return {config.model.n, config.model.gamma, config.model.h}; }

QuadraticModel build_model(const ExperimentConfig& config) {
  const ChainParams p = chain_params(config);
  if (config.bath.type == BathType::Redfield) {
    XYRedfieldParams bath;
    bath.beta_left = config.bath.beta_left;
    bath.beta_right = config.bath.beta_right;
    bath.lambda = config.bath.lambda;
    bath.coupling.kappa = config.bath.kappa;
    bath.coupling.theta = config.bath.theta;
    return xy_redfield_model(p, bath);
  }
  return config.bath.form == LindbladForm::Operators ? xy_lindblad_model(p, config.bath.rates)
                                                     : xy_lindblad_model_rates(p, config.bath.rates);
}

std::vector<double> Table::column(const std::string& name) const {
  const auto it = std::find(columns.begin(), columns.end(), name);
  if (it == columns.end()) throw InvalidArgument("no column named " + name);
  const auto idx = static_cast<std::size_t>(it - columns.begin());
  std::vector<double> out;
  for (const auto& row : rows) {
    const double* d = std::get_if<double>(&row[idx]);
    out.push_back(d ? *d : kNaN);
  }
  return out;
}

std::vector<std::string> point_columns() {
  return {"gap",          "heat_current",   "heat_current_rel_stddev", "residual_correlation", "magnetization_mid",
          "magnetization_mean", "entropy_left", "mutual_information", "xi", "positivity_excess"};
}

std::vector<double> evaluate_point(const ExperimentConfig& config) {
  const ChainParams params = chain_params(config);
  const QuadraticModel model = build_model(config);
  const NormalModes modes = normal_modes(structure_matrix(model));
  const TwoPointMatrix two_point = ness_two_point(modes);
  const ObservableReport r = observable_report(two_point, params);
  const int n = params.n;
  double current = kNaN, spread = kNaN;
  if (n >= 5) {
    const CurrentStatistics s = bulk_current(r.heat_current);
    current = s.mean;
    spread = s.relative_stddev;
  }
  double mean_mag = 0.0;
  for (double m : r.magnetization) mean_mag += m;
  mean_mag /= n;
  const double qmi = n % 2 == 0 ? r.mutual_information : kNaN;
  const double residual = n >= 4 ? r.residual_correlation : kNaN;
  return {spectral_gap(modes), current,       spread,     residual, r.magnetization[n / 2], mean_mag, r.entropy_left,
          qmi,                 correlation_length_rate(r.correlation_decay), r.positivity_excess};
}

Table ness_table(const ExperimentConfig& config) {
  const ChainParams params = chain_params(config);
  const NormalModes modes = normal_modes(structure_matrix(build_model(config)));
  const TwoPointMatrix T = ness_two_point(modes);
  const ObservableReport r = observable_report(T, params);
  Table t{{"quantity", "i", "j", "value"}, {}};
  auto scalar = [&](const std::string& q, double v) { t.rows.push_back({q, std::string(), std::string(), v}); };
  auto vec = [&](const std::string& q, const std::vector<double>& v) {
    for (std::size_t i = 0; i < v.size(); ++i) t.rows.push_back({q, static_cast<double>(i), std::string(), v[i]});
  };
  auto mat = [&](const std::string& q, const RMatrix& m) {
    for (Eigen::Index i = 0; i < m.rows(); ++i)
      for (Eigen::Index j = 0; j < m.cols(); ++j)
        t.rows.push_back({q, static_cast<double>(i), static_cast<double>(j), m(i, j)});
  };
  scalar("gap", spectral_gap(modes));
  vec("magnetization", r.magnetization);
  vec("heat_current", r.heat_current);
  vec("energy_density", r.energy_density);
  vec("energy_fluctuation", r.energy_fluctuation);
  vec("correlation_decay", r.correlation_decay);
  if (params.n >= 4) scalar("residual_correlation", r.residual_correlation);
  scalar("entropy_left", r.entropy_left);
  scalar("entropy_right", r.entropy_right);
  scalar("entropy_total", r.entropy_total);
  if (params.n % 2 == 0) scalar("mutual_information", r.mutual_information);
  scalar("positivity_excess", r.positivity_excess);
  mat("correlation", r.correlations);
  mat("two_point_B", T.B);
  return t;
}

Table sweep_table(const ExperimentConfig& config, int workers) {
  const auto& axes = config.sweep.axes;
  std::vector<std::vector<double>> grid;
  if (axes.size() == 1) {
    for (double v : axes[0].values) grid.push_back({v});
  } else {
    for (double a : axes[0].values)
      for (double b : axes[1].values) grid.push_back({a, b});
  }
  Table t;
  for (const Axis& a : axes) t.columns.push_back(a.parameter);
  const auto cols = point_columns();
  t.columns.insert(t.columns.end(), cols.begin(), cols.end());
  t.columns.push_back("status");
  t.columns.push_back("message");
  t.rows.resize(grid.size());
  parallel_for(grid.size(), workers, [&](std::size_t i) {
    ExperimentConfig c = config;
    for (std::size_t k = 0; k < axes.size(); ++k) c = with_parameter(c, axes[k].parameter, grid[i][k]);
    std::vector<Cell> row(grid[i].begin(), grid[i].end());
    try {
      for (double v : evaluate_point(c)) row.push_back(v);
      row.push_back(std::string("ok"));
      row.push_back(std::string());
    } catch (const Error& e) {
      row.resize(grid[i].size());
      for (std::size_t k = 0; k < cols.size(); ++k) row.push_back(kNaN);
      row.push_back(e.name());
      row.push_back(std::string(e.what()));
    }
    t.rows[i] = std::move(row);
  });
  return t;
}

Table gap_scaling_table(const ExperimentConfig& config, int workers) {
  std::vector<double> hs = config.gap_scaling.h_values;
  if (hs.empty()) hs.push_back(config.model.h);
  std::vector<std::pair<double, int>> grid;
  for (double h : hs)
    for (int n : config.gap_scaling.n_values) grid.emplace_back(h, n);
  Table t{{"h", "n", "gap", "status", "message"}, {}};
  t.rows.resize(grid.size());
  parallel_for(grid.size(), workers, [&](std::size_t i) {
    const auto [h, n] = grid[i];
    ExperimentConfig c = with_parameter(with_parameter(config, "h", h), "n", n);
    std::vector<Cell> row{h, static_cast<double>(n)};
    try {
      row.push_back(spectral_gap(normal_modes(structure_matrix(build_model(c)))));
      row.push_back(std::string("ok"));
      row.push_back(std::string());
    } catch (const Error& e) {
      row.push_back(kNaN);
      row.push_back(e.name());
      row.push_back(std::string(e.what()));
    }
    t.rows[i] = std::move(row);
  });
  return t;
}

Table dynamics_table(const ExperimentConfig& config) {
  const NormalModes modes = normal_modes(structure_matrix(build_model(config)));
  const double unit = config.dynamics.times_in_inverse_gap ? 1.0 / spectral_gap(modes) : 1.0;
  std::vector<double> times;
  for (double x : config.dynamics.times) times.push_back(x * unit);
  Table t{{"t", "quantity", "i", "value_re", "value_im"}, {}};
  const auto& idx = config.dynamics.indices;
  const auto values = dynamic_correlator(modes, idx[0], idx[1], idx[2], idx[3], times);
  for (std::size_t i = 0; i < times.size(); ++i)
    t.rows.push_back({times[i], std::string("correlator"), std::string(), values[i].real(), values[i].imag()});
  if (config.dynamics.drive) {
    const DriveConfig drive = *config.dynamics.drive;
    TwoPointMatrix state = ness_two_point(modes);
    double now = 0.0;
    for (double target : times) {
      if (target > now) {
        const double start = now;
        auto sampler = [&config, &drive, start](double s) {
          const double field = config.model.h + drive.amplitude * std::sin(drive.frequency * (start + s));
          return structure_matrix(build_model(with_parameter(config, "h", field)));
        };
        const DriveSchedule schedule{sampler, target - start, drive.dt};
        state = propagate_two_point(time_ordered_propagator(schedule, false), state);
        now = target;
      }
      const auto mag = magnetization_profile(state);
      for (std::size_t s = 0; s < mag.size(); ++s)
        t.rows.push_back({target, std::string("magnetization"), static_cast<double>(s), mag[s], 0.0});
    }
  }
  return t;
}

Table oracle_check_table(const ExperimentConfig& config) {
#ifdef THIRDQ_WITH_ORACLE
  const int n = config.model.n;
  const ChainParams params = chain_params(config);
  const QuadraticModel model = build_model(config);
  const StructureMatrix structure = structure_matrix(model);
  const NormalModes modes = normal_modes(structure);
  const TwoPointMatrix T = ness_two_point(modes);
  const oracle::DenseLiouvillean L = oracle::dense_liouvillean(model);
  const CMatrix rho = oracle::oracle_ness(L);
  const auto w = oracle::dense_majoranas(n);
  Table t{{"check", "max_abs_deviation"}, {}};
  auto add = [&](const std::string& name, double v) { t.rows.push_back({name, v}); };

  add("two_point", linalg::max_abs(T.T - oracle::two_point_of(rho, n)));
  const RMatrix C = spin_correlation_matrix(T);
  double dc = 0.0, dm = 0.0;
  const auto mag = magnetization_profile(T);
  for (int l = 0; l < n; ++l) {
    const CMatrix zl = oracle::pauli(l, 'z', n);
    dm = std::max(dm, std::abs(mag[l] - oracle::oracle_expectation(rho, zl)));
    for (int m = 0; m < n; ++m) {
      const CMatrix zm = oracle::pauli(m, 'z', n);
      const cplx ref = oracle::oracle_expectation(rho, zl * zm) -
                       oracle::oracle_expectation(rho, zl) * oracle::oracle_expectation(rho, zm);
      dc = std::max(dc, std::abs(C(l, m) - ref));
    }
  }
  add("magnetization", dm);
  add("spin_correlation", dc);
  std::vector<int> left;
  for (int s = 0; s < std::max(1, n / 2); ++s) left.push_back(s);
  add("block_entropy",
      std::abs(block_entropy(T, left).entropy - oracle::von_neumann_entropy(oracle::oracle_reduced(rho, left, n))));
  if (n % 2 == 0) {
    std::vector<int> right;
    for (int s = n / 2; s < n; ++s) right.push_back(s);
    const double ref = oracle::von_neumann_entropy(oracle::oracle_reduced(rho, left, n)) +
                       oracle::von_neumann_entropy(oracle::oracle_reduced(rho, right, n)) -
                       oracle::von_neumann_entropy(rho);
    add("mutual_information", std::abs(quantum_mutual_information(T).qmi - ref));
  }
  double de = 0.0, dq = 0.0;
  const auto e = energy_profile(T, params);
  const auto dens = energy_density_matrices(params);
  for (std::size_t b = 0; b < dens.size(); ++b)
    de = std::max(de, std::abs(e[b] - oracle::oracle_expectation(rho, oracle::dense_quadratic(w, dens[b]))));
  add("energy_density", de);
  if (n >= 3) {
    const auto q = heat_current_profile(T, params);
    const auto qm = heat_current_matrices(params);
    for (std::size_t b = 0; b < qm.size(); ++b)
      dq = std::max(dq, std::abs(q[b] - oracle::oracle_expectation(rho, oracle::dense_quadratic(w, qm[b]))));
    add("heat_current", dq);
  }
  if (n <= 8) add("even_spectrum", oracle::multiset_distance(oracle::even_sector_spectrum(L),
                                                             liouvillean_eigenvalues(modes, even_selectors(n))));
  GreenQuadrature quadrature;
  quadrature.tolerance = 1e-10;
  add("green_two_point", linalg::max_abs(ness_two_point_green(structure, quadrature).two_point.T - T.T));
  if (config.bath.type == BathType::Redfield && config.bath.beta_left == config.bath.beta_right) {
    const CMatrix boltzmann = oracle::boltzmann_operator(model.hamiltonian, config.bath.beta_left);
    add("gibbs_residual",
        oracle::vectorize(oracle::apply(L, boltzmann)).norm() / oracle::vectorize(boltzmann).norm());
  }
  return t;
#else
  (void)config;
  throw ConfigError("task oracle_check: this build has no oracle");
#endif
}

json summarize(const ExperimentConfig& config, const Table& table) {
  json s;
  s["task"] = task_name(config.task);
  switch (config.task) {
    case Task::Ness: {
      std::vector<double> decay, current;
      for (const auto& row : table.rows) {
        const std::string& q = std::get<std::string>(row[0]);
        if (q == "correlation_decay") decay.push_back(std::get<double>(row[3]));
        if (q == "heat_current") current.push_back(std::get<double>(row[3]));
        if (q == "gap" || q == "residual_correlation" || q == "mutual_information") s[q] = std::get<double>(row[3]);
      }
      if (config.model.n >= 5) {
        const CurrentStatistics c = bulk_current(current);
        s["heat_current"] = c.mean;
        s["heat_current_rel_stddev"] = c.relative_stddev;
      }
      std::vector<double> rs;
      for (std::size_t r = 0; r < decay.size(); ++r) rs.push_back(static_cast<double>(r));
      s["xi_fit"] = window_fit("exponential", rs, fit_ys(decay), true, 1e-20);
      break;
    }
    case Task::Sweep: {
      json fits = json::array();
      const std::string x = config.sweep.axes[0].parameter;
      for (const FitConfig& f : config.sweep.fits) {
        json entry = window_fit(f.kind, table.column(x), table.column(f.y), f.window, f.noise_floor);
        entry["kind"] = f.kind;
        entry["x"] = x;
        entry["y"] = f.y;
        fits.push_back(entry);
      }
      s["fits"] = fits;
      std::size_t failures = 0;
      const auto status_idx = table.columns.size() - 2;
      for (const auto& row : table.rows)
        if (std::get<std::string>(row[status_idx]) != "ok") ++failures;
      s["failed_points"] = failures;
      break;
    }
    case Task::GapScaling: {
      json fits = json::array();
      const auto hs = table.column("h"), ns = table.column("n"), gaps = table.column("gap");
      std::vector<double> distinct = hs;
      distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
      for (double h : distinct) {
        std::vector<double> x, y;
        for (std::size_t i = 0; i < hs.size(); ++i)
          if (hs[i] == h) {
            x.push_back(ns[i]);
            y.push_back(gaps[i]);
          }
        json entry = window_fit("power_law", x, y, false, 0.0);
        entry["h"] = h;
        fits.push_back(entry);
      }
      s["fits"] = fits;
      break;
    }
    case Task::Dynamics:
      s["rows"] = table.rows.size();
      break;
    case Task::OracleCheck: {
      double worst = 0.0;
      for (const auto& row : table.rows) worst = std::max(worst, std::get<double>(row[1]));
      s["max_abs_deviation"] = worst;
      s["passed"] = worst <= 1e-8;
      break;
    }
  }
  return s;
}

std::string to_csv(const Table& table) {
  std::string out;
  for (std::size_t i = 0; i < table.columns.size(); ++i) out += (i ? "," : "") + csv_escape(table.columns[i]);
  out += "\n";
  for (const auto& row : table.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out += ",";
      if (const double* d = std::get_if<double>(&row[i]))
        out += format_number(*d);
      else
        out += csv_escape(std::get<std::string>(row[i]));
    }
    out += "\n";
  }
  return out;
}

json table_to_json(const Table& table) {
  json rows = json::array();
  for (const auto& row : table.rows) {
    json r = json::array();
    for (const Cell& c : row) r.push_back(cell_json(c));
    rows.push_back(r);
  }
  return {{"columns", table.columns}, {"rows", rows}};
}

RunResult run(const ExperimentConfig& input, const RunOptions& options) {
  // Single-threaded BLAS keeps results independent of the worker count.
  openblas_set_num_threads(1);
  ExperimentConfig config = input;
  if (options.output_dir) config.output.directory = *options.output_dir;
  if (options.format) config.output.format = *options.format;
  if (options.workers < 1) throw ConfigError("workers: must be at least 1");

  const auto started = std::chrono::steady_clock::now();
  Table table;
  switch (config.task) {
    case Task::Ness: table = ness_table(config); break;
    case Task::Sweep: table = sweep_table(config, options.workers); break;
    case Task::GapScaling: table = gap_scaling_table(config, options.workers); break;
    case Task::Dynamics: table = dynamics_table(config); break;
    case Task::OracleCheck: table = oracle_check_table(config); break;
  }
  const json summary = summarize(config, table);
  const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();

  const std::filesystem::path dir(config.output.directory);
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw ConfigError("output directory " + dir.string() + ": " + ec.message());
  const std::string stem = task_name(config.task);
  RunResult result;
  if (config.output.format == Format::Csv) {
    result.data_file = (dir / (stem + ".csv")).string();
    write_file(result.data_file, to_csv(table));
  } else {
    result.data_file = (dir / (stem + ".json")).string();
    write_file(result.data_file, table_to_json(table).dump(2) + "\n");
  }
  result.summary_file = (dir / "summary.json").string();
  write_file(result.summary_file, summary.dump(2) + "\n");
  result.metadata_file = (dir / "metadata.json").string();
  const json metadata{{"config", to_json(config)}, {"version", kVersion}, {"wall_time_s", wall}};
  write_file(result.metadata_file, metadata.dump(2) + "\n");
  result.summary = summary;
  return result;
}

}  // namespace thirdq::experiment
