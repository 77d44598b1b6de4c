#include "esym/integrator.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>

namespace esym {

std::string method_name(Method m) { return m == Method::rk4_fixed ? "rk4_fixed" : "rk45_adaptive"; }

Method method_from_name(const std::string& s) {
  if (s == "rk4_fixed") return Method::rk4_fixed;
  if (s == "rk45_adaptive") return Method::rk45_adaptive;
  throw std::invalid_argument("unknown integration method '" + s + "'");
}

std::string status_name(Status s) {
  switch (s) {
    case Status::completed: return "completed";
    case Status::left_region: return "left_region";
    case Status::step_underflow: return "step_underflow";
  }
  return "completed";
}

Status status_from_name(const std::string& s) {
  if (s == "completed") return Status::completed;
  if (s == "left_region") return Status::left_region;
  if (s == "step_underflow") return Status::step_underflow;
  throw std::invalid_argument("unknown status '" + s + "'");
}

void IntegratorConfig::validate() const {
  if (!(T > 0)) throw std::invalid_argument("horizon T must be positive");
  if (!(dt > 0)) throw std::invalid_argument("dt must be positive");
  if (sample_stride < 1) throw std::invalid_argument("sample_stride must be >= 1");
  if (method == Method::rk45_adaptive) {
    if (!(rtol > 0) || !(atol > 0)) throw std::invalid_argument("tolerances must be positive");
    if (!(dt_min > 0) || !(dt_max >= dt_min)) throw std::invalid_argument("need 0 < dt_min <= dt_max");
  }
}

namespace {

constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                 a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                 a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784,
                 b6 = 11.0 / 84;
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                 e6 = 22.0 / 525, e7 = -1.0 / 40;

bool all_finite(std::span<const double> v) {
  return std::all_of(v.begin(), v.end(), [](double x) { return std::isfinite(x); });
}

class Stepper {
 public:
  Stepper(const OdeSystem& sys) : sys_(sys) {}

  // false when the point is outside the region or the velocity is not finite
  bool eval(std::span<const double> x, std::span<double> dx) const {
    if (sys_.region && !sys_.region(x)) {
      region_hit = true;
      return false;
    }
    sys_.field(x, dx);
    for (int i : sys_.frozen) dx[static_cast<std::size_t>(i)] = 0.0;
    return all_finite(dx);
  }

  mutable bool region_hit = false;

 private:
  const OdeSystem& sys_;
};

struct Recorder {
  const OdeSystem& sys;
  Trajectory& tr;
  void record(double t, const std::vector<double>& x) {
    tr.times.push_back(t);
    tr.states.push_back(x);
    std::vector<double> mv;
    mv.reserve(sys.monitors.size());
    for (const auto& m : sys.monitors) mv.push_back(m.f(x));
    tr.monitors.push_back(std::move(mv));
  }
};

}  // namespace

Trajectory integrate(const OdeSystem& sys, std::vector<double> x, const IntegratorConfig& cfg) {
  cfg.validate();
  const auto n = static_cast<std::size_t>(sys.dim);
  if (x.size() != n) throw std::invalid_argument("initial state has the wrong dimension");
  if (!all_finite(x)) throw std::invalid_argument("initial state contains non-finite entries");
  if (sys.region && !sys.region(x)) throw std::invalid_argument("initial state lies outside the region");

  Trajectory tr;
  tr.state_names = sys.state_names;
  for (const auto& m : sys.monitors) tr.monitor_names.push_back(m.name);
  Recorder rec{sys, tr};
  Stepper st(sys);

  std::vector<double> k1(n), k2(n), k3(n), k4(n), k5(n), k6(n), k7(n), y(n), xn(n);
  double t = 0.0;
  const double T = cfg.T;
  rec.record(t, x);
  long since_sample = 0;

  auto finish = [&](Status s, const std::string& msg) {
    tr.status = s;
    tr.message = msg;
    if (tr.times.back() != t) rec.record(t, x);
    return tr;
  };
  auto done = [&]() { return T - t <= 1e-14 * std::max(1.0, std::abs(T)); };

  st.region_hit = false;
  if (!st.eval(x, k1)) throw IntegrationError("field is not finite at the accepted state", t, x);

  if (cfg.method == Method::rk4_fixed) {
    long k = 0;
    while (!done()) {
      const double h = std::min(cfg.dt, T - t);
      auto stage = [&](const std::vector<double>& k, double c, std::vector<double>& out) {
        for (std::size_t i = 0; i < n; ++i) y[i] = x[i] + c * h * k[i];
        return st.eval(y, out);
      };
      st.region_hit = false;
      if (!stage(k1, 0.5, k2) || !stage(k2, 0.5, k3) || !stage(k3, 1.0, k4)) {
        if (st.region_hit) return finish(Status::left_region, "stage left the region");
        throw IntegrationError("field is not finite at a stage", t, x);
      }
      for (std::size_t i = 0; i < n; ++i) xn[i] = x[i] + h / 6.0 * (k1[i] + 2 * k2[i] + 2 * k3[i] + k4[i]);
      st.region_hit = false;
      if (!st.eval(xn, k7)) {
        if (st.region_hit) return finish(Status::left_region, "state left the region");
        throw IntegrationError("field is not finite at the accepted state", t + h, xn);
      }
      x.swap(xn);
      k1.swap(k7);
      ++k;
      t = static_cast<double>(k) * cfg.dt;
      if (T - t <= 1e-9 * cfg.dt) t = T;
      ++tr.steps_accepted;
      if (++since_sample >= cfg.sample_stride || done()) {
        rec.record(t, x);
        since_sample = 0;
      }
    }
    return finish(Status::completed, "");
  }

  double h = std::min(cfg.dt, cfg.dt_max);
  double err_prev = 1.0;
  while (!done()) {
    h = std::min(h, T - t);
    st.region_hit = false;
    bool ok = true;
    auto stage = [&](std::vector<double>& out, std::initializer_list<std::pair<const std::vector<double>*, double>> terms) {
      for (std::size_t i = 0; i < n; ++i) {
        double s = x[i];
        for (const auto& [k, a] : terms) s += h * a * (*k)[i];
        y[i] = s;
      }
      return st.eval(y, out);
    };
    ok = ok && stage(k2, {{&k1, a21}});
    ok = ok && stage(k3, {{&k1, a31}, {&k2, a32}});
    ok = ok && stage(k4, {{&k1, a41}, {&k2, a42}, {&k3, a43}});
    ok = ok && stage(k5, {{&k1, a51}, {&k2, a52}, {&k3, a53}, {&k4, a54}});
    ok = ok && stage(k6, {{&k1, a61}, {&k2, a62}, {&k3, a63}, {&k4, a64}, {&k5, a65}});
    double err = std::numeric_limits<double>::infinity();
    if (ok) {
      for (std::size_t i = 0; i < n; ++i)
        xn[i] = x[i] + h * (b1 * k1[i] + b3 * k3[i] + b4 * k4[i] + b5 * k5[i] + b6 * k6[i]);
      ok = st.eval(xn, k7);
    }
    if (ok) {
      double s = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        const double e = h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] + e7 * k7[i]);
        const double sc = cfg.atol + cfg.rtol * std::max(std::abs(x[i]), std::abs(xn[i]));
        s += (e / sc) * (e / sc);
      }
      err = n ? std::sqrt(s / static_cast<double>(n)) : 0.0;
      if (!std::isfinite(err)) ok = false;
    }
    if (ok && err <= 1.0) {
      const double step = h;
      x.swap(xn);
      k1.swap(k7);
      t = (T - t - step <= 0) ? T : t + step;
      ++tr.steps_accepted;
      tr.max_accepted_error = std::max(tr.max_accepted_error, err);
      if (++since_sample >= cfg.sample_stride || done()) {
        rec.record(t, x);
        since_sample = 0;
      }
      const double e = std::max(err, 1e-10);
      double fac = 0.9 * std::pow(e, -0.7 / 5.0) * std::pow(err_prev, 0.4 / 5.0);
      fac = std::clamp(fac, 0.2, 5.0);
      err_prev = e;
      if (step == h) h = std::min(h * fac, cfg.dt_max);
      continue;
    }
    ++tr.steps_rejected;
    const bool region = !ok && st.region_hit;
    if (ok) h *= std::max(0.2, 0.9 * std::pow(err, -0.2));
    else h *= 0.25;
    if (h < cfg.dt_min) {
      if (region) return finish(Status::left_region, "trajectory reached the region boundary");
      return finish(Status::step_underflow, "step size fell below dt_min");
    }
  }
  return finish(Status::completed, "");
}

InvariantReport invariant_report(const Trajectory& traj) {
  if (traj.times.empty()) throw std::invalid_argument("empty trajectory");
  InvariantReport r;
  r.status = traj.status;
  r.samples = traj.times.size();
  r.final_time = traj.times.back();
  for (std::size_t c = 0; c < traj.monitor_names.size(); ++c) {
    ChannelDrift d;
    d.initial = traj.monitors.front()[c];
    for (const auto& row : traj.monitors) {
      const double diff = std::abs(row[c] - d.initial);
      d.max_abs = std::max(d.max_abs, std::isfinite(diff) ? diff : std::numeric_limits<double>::infinity());
    }
    d.max_rel = d.max_abs / std::max(1.0, std::abs(d.initial));
    r.channels[traj.monitor_names[c]] = d;
  }
  return r;
}

nlohmann::json report_to_json(const InvariantReport& r) {
  nlohmann::json j;
  j["status"] = status_name(r.status);
  j["samples"] = r.samples;
  j["final_time"] = r.final_time;
  nlohmann::json ch = nlohmann::json::object();
  for (const auto& [name, d] : r.channels)
    ch[name] = {{"initial", d.initial}, {"max_abs_drift", d.max_abs}, {"max_rel_drift", d.max_rel}};
  j["channels"] = ch;
  return j;
}

std::string format_g17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

namespace {

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

nlohmann::json num(double v) {
  if (std::isfinite(v)) return v;
  return nullptr;
}

}  // namespace

void write_csv(const Trajectory& traj, std::ostream& os) {
  os << "t";
  for (const auto& s : traj.state_names) os << ',' << csv_field(s);
  for (const auto& s : traj.monitor_names) os << ',' << csv_field(s);
  os << "\r\n";
  for (std::size_t r = 0; r < traj.times.size(); ++r) {
    os << format_g17(traj.times[r]);
    for (double v : traj.states[r]) os << ',' << format_g17(v);
    for (double v : traj.monitors[r]) os << ',' << format_g17(v);
    os << "\r\n";
  }
}

nlohmann::json trajectory_to_json(const Trajectory& traj, const nlohmann::json& meta) {
  nlohmann::json j;
  j["meta"] = meta;
  nlohmann::json cols = nlohmann::json::array({"t"});
  for (const auto& s : traj.state_names) cols.push_back(s);
  for (const auto& s : traj.monitor_names) cols.push_back(s);
  j["columns"] = cols;
  nlohmann::json rows = nlohmann::json::array();
  for (std::size_t r = 0; r < traj.times.size(); ++r) {
    nlohmann::json row = nlohmann::json::array({num(traj.times[r])});
    for (double v : traj.states[r]) row.push_back(num(v));
    for (double v : traj.monitors[r]) row.push_back(num(v));
    rows.push_back(std::move(row));
  }
  j["rows"] = std::move(rows);
  j["status"] = status_name(traj.status);
  return j;
}

Trajectory trajectory_from_json(const nlohmann::json& j) {
  Trajectory tr;
  tr.status = status_from_name(j.at("status").get<std::string>());
  const auto& cols = j.at("columns");
  const std::size_t ns = j.at("meta").value("state_size", cols.size() - 1);
  for (std::size_t c = 1; c < cols.size(); ++c) {
    if (c <= ns) tr.state_names.push_back(cols[c].get<std::string>());
    else tr.monitor_names.push_back(cols[c].get<std::string>());
  }
  auto get = [](const nlohmann::json& v) {
    return v.is_null() ? std::numeric_limits<double>::quiet_NaN() : v.get<double>();
  };
  for (const auto& row : j.at("rows")) {
    tr.times.push_back(get(row[0]));
    std::vector<double> s, m;
    for (std::size_t c = 1; c < row.size(); ++c) (c <= ns ? s : m).push_back(get(row[c]));
    tr.states.push_back(std::move(s));
    tr.monitors.push_back(std::move(m));
  }
  return tr;
}

}  // namespace esym
