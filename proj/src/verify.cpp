#include <algorithm>
#include <cmath>
#include <iomanip>
#include <random>
#include <sstream>

#include "esym/cli.hpp"

namespace esym {

namespace {

using Rng = std::mt19937_64;
using Fn = std::function<double(std::span<const double>)>;
using VecFn = std::function<Eigen::VectorXd(std::span<const double>)>;
using MatFn = std::function<Eigen::MatrixXd(std::span<const double>)>;

double uni(Rng& r, double a, double b) { return std::uniform_real_distribution<double>(a, b)(r); }

std::vector<double> random_point(const EFrame& f, Rng& r, double lo = 0.1) {
  for (int attempt = 0; attempt < 10000; ++attempt) {
    std::vector<double> q(static_cast<std::size_t>(f.n()));
    for (auto& v : q) {
      v = uni(r, lo, 1.0);
      if (uni(r, 0, 1) < 0.5) v = -v;
    }
    if (f.chart.contains(q)) return q;
  }
  throw std::runtime_error("no admissible random point in chart " + f.chart.name);
}

// smooth test function sin(a.y + c) + 1/2 sum b_i y_i^2 on nvars variables
Expr random_function(int nvars, Rng& r) {
  Expr lin(uni(r, -1, 1));
  Expr quad(0.0);
  for (int i = 0; i < nvars; ++i) {
    lin = lin + Expr(uni(r, -1, 1)) * Expr::var(i);
    quad = quad + Expr(0.5 * uni(r, -1, 1)) * Expr::var(i) * Expr::var(i);
  }
  return sin(lin) + quad;
}

Eigen::VectorXd fd_gradient(const Fn& f, std::span<const double> x) {
  Eigen::VectorXd g(static_cast<Eigen::Index>(x.size()));
  for (std::size_t i = 0; i < x.size(); ++i) g(static_cast<Eigen::Index>(i)) = central_difference(f, x, static_cast<int>(i));
  return g;
}

VecFn expr_gradient(const Expr& e, int nvars) {
  std::vector<Expr> d;
  for (int i = 0; i < nvars; ++i) d.push_back(e.diff(i));
  return [d](std::span<const double> x) {
    Eigen::VectorXd g(static_cast<Eigen::Index>(d.size()));
    for (std::size_t i = 0; i < d.size(); ++i) g(static_cast<Eigen::Index>(i)) = d[i].eval(x);
    return g;
  };
}

struct Scalar {
  Fn f;
  VecFn grad;  // ambient
};

Scalar from_expr(const Expr& e, int nvars) {
  return {[e](std::span<const double> x) { return e.eval(x); }, expr_gradient(e, nvars)};
}

// {f, g} = (R grad f)^T Pi (R grad g), with R the frame rows in ambient coordinates
Scalar bracket(const Scalar& f, const Scalar& g, const MatFn& Pi, const MatFn& R) {
  Fn v = [f, g, Pi, R](std::span<const double> x) {
    const Eigen::MatrixXd Rx = R(x);
    return (Rx * f.grad(x)).dot(Pi(x) * (Rx * g.grad(x)));
  };
  return {v, [v](std::span<const double> x) { return fd_gradient(v, x); }};
}

double jacobi_fd(const Scalar& f, const Scalar& g, const Scalar& h, const MatFn& Pi, const MatFn& R,
                 std::span<const double> x) {
  const double a = bracket(f, bracket(g, h, Pi, R), Pi, R).f(x);
  const double b = bracket(g, bracket(h, f, Pi, R), Pi, R).f(x);
  const double c = bracket(h, bracket(f, g, Pi, R), Pi, R).f(x);
  return std::abs(a + b + c);
}

MatFn gauge_rows(const GaugeData& gd) {
  return [gd](std::span<const double> y) {
    const int n = gd.n(), P = gd.p(), D = gd.d();
    Eigen::MatrixXd R = Eigen::MatrixXd::Zero(2 * P + D, n + P + D);
    R.block(0, 0, P, n) = gd.frame.anchor_at(y.first(static_cast<std::size_t>(n)));
    R.block(P, n, P + D, P + D) = Eigen::MatrixXd::Identity(P + D, P + D);
    return R;
  };
}

std::vector<EFrame> builtin_frames() {
  return {make_b_structure(2, 1),        make_b_structure(3, 2),       make_b_structure(2, 3),
          make_corner_structure(3, 2),   make_foliation_structure(4, 3), make_elliptic_structure(),
          make_vanishing_structure()};
}

std::string frame_label(const EFrame& f) {
  std::string s = family_name(f.family);
  if (f.family_param) s += std::to_string(f.family_param);
  return s + "_n" + std::to_string(f.n());
}

class Suite {
 public:
  Suite(std::string name, std::vector<CheckResult>& out) : name_(std::move(name)), out_(out) {}
  // pass iff value < threshold
  void below(const std::string& check, double value, double threshold) {
    out_.push_back({name_, check, value, threshold, std::isfinite(value) && value < threshold});
  }
  void flag(const std::string& check, bool ok) { out_.push_back({name_, check, ok ? 1.0 : 0.0, 1.0, ok, true}); }

 private:
  std::string name_;
  std::vector<CheckResult>& out_;
};

void suite_estructure(std::vector<CheckResult>& out) {
  Suite s("estructure", out);
  Rng r(101);
  for (const auto& f : builtin_frames()) {
    double br = 0.0, jr = 0.0;
    for (int k = 0; k < 20; ++k) {
      const auto q = random_point(f, r);
      for (int i = 0; i < f.p; ++i)
        for (int j = 0; j < f.p; ++j) {
          br = std::max(br, bracket_residual(f, q, i, j));
          for (int l = 0; l < f.p; ++l) jr = std::max(jr, jacobi_residual(f, q, i, j, l));
        }
    }
    s.below("bracket_" + frame_label(f), br, 1e-7);
    s.below("jacobi_" + frame_label(f), jr, 1e-7);
  }
}

EForm random_form(int degree, int p, int n, Rng& r) {
  EForm w;
  w.degree = degree;
  if (degree == 0) return EForm::scalar(random_function(n, r));
  std::vector<int> idx(static_cast<std::size_t>(degree));
  std::function<void(int, int)> rec = [&](int pos, int start) {
    if (pos == degree) {
      w.set(idx, random_function(n, r));
      return;
    }
    for (int i = start; i < p; ++i) {
      idx[static_cast<std::size_t>(pos)] = i;
      rec(pos + 1, i + 1);
    }
  };
  rec(0, 0);
  return w;
}

void suite_ecalculus(std::vector<CheckResult>& out) {
  Suite s("ecalculus", out);
  Rng r(202);
  for (const auto& f : builtin_frames()) {
    double worst = 0.0;
    for (int k = 0; k < 6; ++k) {
      const int deg = k % std::min(3, f.p);
      const EForm w = random_form(deg, f.p, f.n(), r);
      const auto q = random_point(f, r);
      worst = std::max(worst, d_squared_residual(w, f, q));
    }
    s.below("d_squared_" + frame_label(f), worst, 1e-6);
  }
  const EFrame v = make_vanishing_structure();
  const EForm dE2 = e_differential(EForm::basis(1), v);
  double dev = 0.0;
  for (int k = 0; k < 10; ++k) {
    const auto q = random_point(v, r);
    const auto c = dE2.eval(q);
    const auto it = c.find({0, 1});
    dev = std::max(dev, std::abs((it == c.end() ? 0.0 : it->second) + 1.0));
  }
  s.below("vanishing_dE2_is_minus_E1E2", dev, 1e-12);
}

void suite_phasespace(std::vector<CheckResult>& out) {
  Suite s("phasespace", out);
  Rng r(303);
  for (const auto& f : builtin_frames()) {
    double worst = 0.0;
    for (int k = 0; k < 20; ++k) {
      PhasePoint pt{random_point(f, r), {}};
      for (int i = 0; i < f.p; ++i) pt.m.push_back(uni(r, -2, 2));
      worst = std::max(worst, std::abs(canonical_symplectic(f, pt).determinant() - 1.0));
    }
    s.below("det_omega_" + frame_label(f), worst, 1e-12);
  }
  // b-cotangent: dp1 ^ dq1/q1 + sum dpi ^ dqi in the frame basis (E, V)
  {
    const EFrame f = make_b_structure(3, 1);
    double worst = 0.0;
    for (int k = 0; k < 20; ++k) {
      PhasePoint pt{random_point(f, r), {uni(r, -2, 2), uni(r, -2, 2), uni(r, -2, 2)}};
      const Eigen::MatrixXd W = canonical_symplectic(f, pt);
      Eigen::MatrixXd ref = Eigen::MatrixXd::Zero(6, 6);
      for (int i = 0; i < 3; ++i) {
        ref(i, 3 + i) = -1.0;
        ref(3 + i, i) = 1.0;
      }
      worst = std::max(worst, (W - ref).cwiseAbs().maxCoeff());
    }
    s.below("b_canonical_form_entries", worst, 1e-12);
  }
  // Jacobi identity of the cotangent bracket
  for (const EFrame& f : {make_vanishing_structure(), make_b_structure(2, 2)}) {
    const PhaseSpace ps = cotangent_bundle(f);
    const int N = ps.state_size();
    const MatFn Pi = [ps](std::span<const double> x) { return ps.poisson_matrix(x); };
    const MatFn R = [ps](std::span<const double> x) { return ps.frame.anchor_at(x); };
    double worst = 0.0;
    for (int k = 0; k < 5; ++k) {
      std::vector<double> x = random_point(f, r);
      for (int i = 0; i < f.p; ++i) x.push_back(uni(r, -1, 1));
      worst = std::max(worst, jacobi_fd(from_expr(random_function(N, r), N), from_expr(random_function(N, r), N),
                                        from_expr(random_function(N, r), N), Pi, R, x));
    }
    s.below("poisson_jacobi_" + frame_label(f), worst, 1e-6);
  }
  // a point on the boundary stays there
  {
    const EFrame f = make_corner_structure(3, 2);
    const PhaseSpace ps = cotangent_bundle(f);
    ScenarioSpec sp;
    sp.phase = ps;
    sp.state_names = ps.names;
    sp.hamiltonian = EFunction(random_function(6, r), 6);
    IntegratorConfig ic;
    ic.T = 2.0;
    const Trajectory tr = integrate(sp.system(), {0.0, 0.4, 0.2, 0.3, -0.2, 0.1}, ic);
    double worst = 0.0;
    for (const auto& x : tr.states) worst = std::max(worst, std::abs(x[0]));
    s.below("boundary_invariance_corner", worst, 1e-300);
  }
}

void suite_riemann(std::vector<CheckResult>& out) {
  Suite s("riemann", out);
  const EFrame f = make_foliation_structure(2, 2);
  const EMetric g(f, {{Expr(1.0), Expr(0.0)}, {Expr(0.0), Expr(1.0)}});
  s.below("kinetic_identity_3_4", std::abs(kinetic_hamiltonian(g, {{0.0, 0.0}, {3.0, 4.0}}) - 25.0), 1e-14);
  Rng r(404);
  const EMetric pm = penrose_metric(1.0);
  double worst = 0.0;
  for (int k = 0; k < 20; ++k) {
    std::vector<double> q = {uni(r, 0.01, 0.15), uni(r, -1.0, 0.0)};
    if (!pm.frame.chart.contains(q)) continue;
    const std::vector<double> v = {uni(r, -1, 1), uni(r, -1, 1)};
    const Eigen::VectorXd a = metric_flat(pm, q, v);
    const Eigen::VectorXd back = metric_sharp(pm, q, std::span<const double>(a.data(), 2));
    worst = std::max(worst, std::abs(back(0) - v[0]) + std::abs(back(1) - v[1]));
  }
  s.below("sharp_flat_roundtrip_penrose", worst, 1e-10);
}

GaugeData so3_on_vanishing() {
  const EFrame f = make_vanishing_structure();
  const Expr x = Expr::var(0), y = Expr::var(1);
  return GaugeData(LieAlgebra::so3(), f,
                   {{Expr(0.3) * y, Expr(0.2) * x * y, sin(x)}, {Expr(0.5) * x, cos(y), Expr(0.1)}});
}

void suite_gauge(std::vector<CheckResult>& out, BivectorMutation mut) {
  Suite s("gauge", out);
  Rng r(505);
  // Psi is a Poisson map from the uncoupled to the coupled bracket
  std::vector<std::pair<std::string, GaugeData>> maps;
  maps.emplace_back("abelian", GaugeData(LieAlgebra::u1(), make_b_structure(2, 1),
                                         {{Expr(0.3) * Expr::var(1)}, {sin(Expr::var(0))}}));
  maps.emplace_back("so3_vanishing", so3_on_vanishing());
  for (const auto& [label, gd] : maps) {
    const EFrame& f = gd.frame;
    const int N = gd.state_size();
    const MatFn R = gauge_rows(gd);
    const MatFn Pu = [gd = gd](std::span<const double> y) { return uncoupled_poisson_bivector(gd, y); };
    const MatFn Pc = [gd = gd, mut](std::span<const double> y) { return coupled_poisson_bivector(gd, y, mut); };
    auto psi = [gd = gd](std::span<const double> x) {
      const auto n = static_cast<std::size_t>(gd.n()), P = static_cast<std::size_t>(gd.p());
      GaugePhasePoint pt{{x.begin(), x.begin() + n}, {x.begin() + n, x.begin() + n + P}, {x.begin() + n + P, x.end()}};
      return minimal_coupling_map(gd, pt).flat();
    };
    double worst = 0.0;
    for (int k = 0; k < 50; ++k) {
      std::vector<double> x = random_point(f, r);
      for (int i = 0; i < gd.p() + gd.d(); ++i) x.push_back(uni(r, -1, 1));
      const Expr F = random_function(N, r), G = random_function(N, r);
      const Scalar Fs = from_expr(F, N), Gs = from_expr(G, N);
      auto pull = [psi](const Expr& e) {
        Fn f = [psi, e](std::span<const double> x) { return e.eval(psi(x)); };
        return Scalar{f, [f](std::span<const double> x) { return fd_gradient(f, x); }};
      };
      const double lhs = bracket(pull(F), pull(G), Pu, R).f(x);
      const double rhs = bracket(Fs, Gs, Pc, R).f(psi(x));
      worst = std::max(worst, std::abs(lhs - rhs));
    }
    s.below("coupling_equivalence_" + label, worst, 1e-6);
  }
  // Jacobi identity of the coupled bracket
  std::vector<std::pair<std::string, GaugeData>> cases;
  cases.emplace_back("so3_b", make_scenario("wong_so3_b").gauge.value());
  cases.emplace_back("so3_vanishing", so3_on_vanishing());
  cases.emplace_back("u1_plane", make_scenario("wong_u1_plane").gauge.value());
  for (const auto& [label, gd] : cases) {
    const int N = gd.state_size();
    const MatFn R = gauge_rows(gd);
    const MatFn Pc = [gd = gd, mut](std::span<const double> y) { return coupled_poisson_bivector(gd, y, mut); };
    double worst = 0.0;
    const int trials = label == "so3_b" ? 30 : 10;
    for (int k = 0; k < trials; ++k) {
      std::vector<double> y = random_point(gd.frame, r);
      for (int i = 0; i < gd.p() + gd.d(); ++i) y.push_back(uni(r, -1, 1));
      worst = std::max(worst, jacobi_fd(from_expr(random_function(N, r), N), from_expr(random_function(N, r), N),
                                        from_expr(random_function(N, r), N), Pc, R, y));
    }
    s.below("coupled_poisson_jacobi_" + label, worst, 1e-6);
  }
}

void suite_symmetry(std::vector<CheckResult>& out) {
  Suite s("symmetry", out);
  const ScenarioSpec sp = make_scenario("radko_sphere");
  Rng r(606);
  double res = 0.0, tang = 0.0;
  for (int k = 0; k < 100; ++k) {
    const std::vector<double> x = {k == 0 ? 0.0 : uni(r, -0.99, 0.99), uni(r, -3, 3)};
    res = std::max(res, moment_residual(*sp.action, *sp.moment, sp.phase, x));
    tang = std::max(tang, level_tangency(*sp.action, *sp.moment, sp.phase, x));
  }
  s.below("radko_moment_residual", res, 1e-7);
  s.below("radko_level_tangency", tang, 1e-7);
}

void suite_integrator(std::vector<CheckResult>& out) {
  Suite s("integrator", out);
  OdeSystem sys;
  sys.dim = 1;
  sys.state_names = {"x"};
  sys.field = [](std::span<const double> x, std::span<double> dx) { dx[0] = x[0]; };
  auto err_at = [&](double dt) {
    IntegratorConfig ic;
    ic.method = Method::rk4_fixed;
    ic.dt = dt;
    ic.T = 1.0;
    const Trajectory tr = integrate(sys, {1.0}, ic);
    return std::abs(tr.states.back()[0] - std::exp(1.0));
  };
  const double ratio = err_at(0.1) / err_at(0.05);
  s.flag("rk4_order_ratio_in_12_20", ratio >= 12 && ratio <= 20);
  // b-flow of H = m1: q1(t) = q1(0) e^t
  ScenarioSpec sp;
  sp.phase = cotangent_bundle(make_b_structure(2, 1));
  sp.state_names = sp.phase.names;
  sp.hamiltonian = EFunction(Expr::var(2), 4);
  IntegratorConfig ic;
  ic.T = 2.0;
  const Trajectory tr = integrate(sp.system(), {0.3, 0.1, 0.0, 0.0}, ic);
  double rel = 0.0;
  for (std::size_t k = 0; k < tr.times.size(); ++k) {
    const double ex = 0.3 * std::exp(tr.times[k]);
    rel = std::max(rel, std::abs(tr.states[k][0] - ex) / ex);
  }
  s.below("b_flow_exponential", rel, 1e-7);
}

double energy_drift(const ScenarioSpec& sp, Trajectory* keep = nullptr, BivectorMutation mut = BivectorMutation::none) {
  const Trajectory tr = integrate(sp.system(mut), sp.x0, sp.integrator);
  const InvariantReport rep = invariant_report(tr);
  const double d = tr.status == Status::completed ? rep.channels.at("energy").max_rel : INFINITY;
  if (keep) *keep = tr;
  return d;
}

// closed-form metric in the recentered chart, built from r directly
Eigen::Matrix2d penrose_closed_form(double a, double b, double M) {
  const double v = std::cos(a) / std::sin(a), w = std::tan(b);
  const double rr = (v - w) / 2.0;
  const double h = 1.0 - 2.0 * M / rr;
  const double c2 = a * a / (std::sin(a) * std::sin(a)), s2 = 1.0 / (std::cos(b) * std::cos(b));
  Eigen::Matrix2d g;
  g << (1 / h - h) * c2 * c2, -(1 / h + h) * c2 * s2, -(1 / h + h) * c2 * s2, (1 / h - h) * s2 * s2;
  return g / 4.0;
}

void suite_scenario(const std::string& name, std::vector<CheckResult>& out, BivectorMutation mut) {
  Suite s(name, out);
  Rng r(707);
  if (name == "radko_sphere") {
    ScenarioSpec sp = make_scenario(name);
    s.below("energy_drift", energy_drift(sp), 1e-7);
    double res = 0.0;
    for (int k = 0; k < 100; ++k) {
      const std::vector<double> x = {k % 10 == 0 ? 0.0 : uni(r, -0.99, 0.99), uni(r, -3, 3)};
      res = std::max(res, moment_residual(*sp.action, *sp.moment, sp.phase, x));
    }
    s.below("moment_residual", res, 1e-7);
  } else if (name == "radko_sphere_geodesic") {
    ScenarioSpec sp = make_scenario(name);
    s.below("energy_drift", energy_drift(sp), 1e-7);
    sp.x0[0] = 0.0;
    Trajectory tr;
    energy_drift(sp, &tr);
    double worst = 0.0;
    for (const auto& x : tr.states) worst = std::max(worst, std::abs(x[0]));
    s.below("boundary_invariance", worst, 1e-300);
  } else if (name == "lorentz_plane") {
    ScenarioSpec sp = make_scenario(name);
    double worst = 0.0;
    for (int k = 0; k < 20; ++k) {
      const std::vector<double> x = {uni(r, -1, 1), uni(r, -1, 1)};
      worst = std::max(worst, std::abs(sp.phase.omega_matrix(x).determinant() - 1.0));
    }
    s.below("det_omega_plus_one", worst, 1e-12);
    s.below("energy_drift", energy_drift(sp), 1e-7);
  } else if (name == "mcgehee_3bp") {
    ScenarioSpec sp = make_scenario(name);
    s.below("energy_drift", energy_drift(sp), 1e-7);
    ScenarioParams kp;
    kp.str["potential"] = "kepler";
    ScenarioSpec col = make_scenario(name, kp);
    col.x0 = {1.0, 0.0, -1.0, 0.0};
    const Trajectory tr = integrate(col.system(), col.x0, col.integrator);
    s.flag("collision_step_underflow", tr.status == Status::step_underflow);
  } else if (name == "penrose_blackhole") {
    const double M = 1.0;
    const EMetric g = penrose_metric(M);
    double me = 0.0, ie = 0.0;
    int used = 0;
    while (used < 20) {
      const std::vector<double> q = {uni(r, 0.005, 0.15), uni(r, -1.2, 0.0)};
      if (!g.frame.chart.contains(q) || q[0] == 0.0) continue;
      ++used;
      const Eigen::Matrix2d P = penrose_closed_form(q[0], q[1], M);
      const Eigen::MatrixXd G = g.matrix(q);
      me = std::max(me, ((G - P).cwiseAbs().array() / (1.0 + P.cwiseAbs().array())).maxCoeff());
      // inverse with prefactor -sin^4 cos^4 / alpha^4 (determinant of the closed-form matrix)
      const double a = q[0], b = q[1];
      const double v = std::cos(a) / std::sin(a), w = std::tan(b);
      const double h = 1.0 - 4.0 * M / (v - w);
      const double c2 = a * a / (std::sin(a) * std::sin(a)), s2 = 1.0 / (std::cos(b) * std::cos(b));
      Eigen::Matrix2d I;
      I << (1 / h - h) * s2 * s2, (1 / h + h) * c2 * s2, (1 / h + h) * c2 * s2, (1 / h - h) * c2 * c2;
      I *= -std::pow(std::sin(a), 4) * std::pow(std::cos(b), 4) / std::pow(a, 4);
      const Eigen::MatrixXd Gi = G.inverse();
      ie = std::max(ie, ((Gi - I).cwiseAbs().array() / (1.0 + I.cwiseAbs().array())).maxCoeff());
    }
    s.below("metric_vs_closed_form_entries", me, 1e-10);
    s.below("inverse_vs_adjugate_entries", ie, 1e-10);
    const ScenarioSpec sp = make_scenario(name);
    double hmax = 0.0;
    bool finite = true;
    for (int k = 1; k <= 12; ++k) {
      const std::vector<double> x = {std::pow(10.0, -k), -0.3, 0.7, -0.4};
      const double H = sp.hamiltonian.eval(x);
      finite = finite && std::isfinite(H);
      hmax = std::max(hmax, std::abs(H));
    }
    s.flag("kinetic_finite_towards_boundary", finite);
    s.below("kinetic_bounded_towards_boundary", hmax, 1e3);
    s.below("energy_drift", energy_drift(sp), 1e-7);
    ScenarioParams gp;
    gp.str["gauge"] = "u1";
    const ScenarioSpec gs = make_scenario(name, gp);
    Trajectory tr;
    s.below("energy_drift_u1", energy_drift(gs, &tr, mut), 1e-7);
    double dq = 0.0;
    for (const auto& x : tr.states) dq = std::max(dq, std::abs(x.back() - gs.x0.back()));
    s.below("charge_conserved_u1", dq, 1e-300);
  } else if (name == "minkowski_foliation") {
    for (const std::string cls : {"timelike", "null", "spacelike"}) {
      ScenarioParams p;
      p.str["class"] = cls;
      ScenarioSpec sp = make_scenario(name, p);
      s.below("energy_drift_" + cls, energy_drift(sp), 1e-7);
      sp.integrator.method = Method::rk4_fixed;
      sp.integrator.dt = 0.05;
      const Trajectory tr = integrate(sp.system(), sp.x0, sp.integrator);
      double sd = 0.0;
      for (std::size_t k = 1; k + 1 < tr.states.size(); ++k)
        for (int i = 0; i < 4; ++i)
          sd = std::max(sd, std::abs(tr.states[k + 1][i] - 2 * tr.states[k][i] + tr.states[k - 1][i]));
      s.below("straight_line_" + cls, sd, 1e-8);
      const double gvv = tr.monitors.front().back();
      s.flag("causal_class_" + cls, cls == "timelike" ? gvv < 0 : cls == "null" ? std::abs(gvv) < 1e-12 : gvv > 0);
    }
  } else if (name == "wong_u1_plane") {
    ScenarioSpec sp = make_scenario(name);
    Trajectory tr;
    s.below("energy_drift", energy_drift(sp, &tr, mut), 1e-7);
    // circle: center q0 + J qdot0 / w, radius |qdot0| / w, w = 2 O B
    const double B = sp.params.get("B", 1.0), O = sp.x0[4];
    const double w = 2.0 * O * B;
    const double vx = 2.0 * sp.x0[2], vy = 2.0 * sp.x0[3];
    const double cx = sp.x0[0] - vy / w, cy = sp.x0[1] + vx / w;
    const double R = std::hypot(vx, vy) / std::abs(w);
    double worst = 0.0, dq = 0.0;
    for (const auto& x : tr.states) {
      worst = std::max(worst, std::abs(std::hypot(x[0] - cx, x[1] - cy) - R));
      dq = std::max(dq, std::abs(x[4] - O));
    }
    s.below("circle_radius_error", worst, 1e-5);
    s.below("charge_conserved", dq, 1e-300);
  } else if (name == "wong_so3_b") {
    ScenarioSpec sp = make_scenario(name);
    Trajectory tr;
    s.below("energy_drift", energy_drift(sp, &tr, mut), 1e-7);
    const InvariantReport rep = invariant_report(tr);
    s.below("casimir_drift", rep.channels.count("casimir_norm") ? rep.channels.at("casimir_norm").max_abs : INFINITY, 1e-6);
    sp.x0[0] = 0.0;
    energy_drift(sp, &tr, mut);
    double worst = 0.0;
    for (const auto& x : tr.states) worst = std::max(worst, std::abs(x[0]));
    s.below("boundary_invariance", worst, 1e-300);
  }
}

const std::vector<std::string> kModules = {"estructure", "ecalculus", "phasespace", "riemann",
                                           "gauge",      "symmetry",  "integrator"};

void run_suite(const std::string& name, std::vector<CheckResult>& out, BivectorMutation mut) {
  const std::size_t before = out.size();
  try {
    if (name == "estructure") suite_estructure(out);
    else if (name == "ecalculus") suite_ecalculus(out);
    else if (name == "phasespace") suite_phasespace(out);
    else if (name == "riemann") suite_riemann(out);
    else if (name == "gauge") suite_gauge(out, mut);
    else if (name == "symmetry") suite_symmetry(out);
    else if (name == "integrator") suite_integrator(out);
    else suite_scenario(name, out, mut);
  } catch (const std::exception& e) {
    out.push_back({name, std::string("exception: ") + e.what(), INFINITY, 0.0, false});
  }
  if (out.size() == before) out.push_back({name, "no checks", 0.0, 0.0, false});
}

}  // namespace

std::vector<CheckResult> run_verify(const std::string& scope, BivectorMutation mutation) {
  std::vector<std::string> all = kModules;
  for (const auto& s : scenario_names()) all.push_back(s);
  std::vector<std::string> chosen;
  if (scope == "all" || scope.empty()) {
    chosen = all;
  } else if (scope == "scenarios") {
    chosen = scenario_names();
  } else {
    for (const auto& s : all)
      if (s == scope) chosen = {s};
    if (chosen.empty())
      for (const auto& s : all)
        if (s.rfind(scope, 0) == 0) chosen.push_back(s);
    if (chosen.size() != 1)
      throw std::invalid_argument("scope '" + scope + "' matches " + std::to_string(chosen.size()) +
                                  " suites; use all, a module or a scenario name");
  }
  std::vector<CheckResult> out;
  for (const auto& s : chosen) run_suite(s, out, mutation);
  return out;
}

int cmd_verify(const std::string& scope, const std::string& mutate, bool json, std::ostream& out,
               std::ostream& err) {
  BivectorMutation mut = BivectorMutation::none;
  if (mutate == "flip_momentum_charge") mut = BivectorMutation::flip_momentum_charge;
  else if (!mutate.empty() && mutate != "none") {
    err << "unknown mutation '" << mutate << "' (none, flip_momentum_charge)\n";
    return kExitConfig;
  }
  std::vector<CheckResult> res;
  try {
    res = run_verify(scope, mut);
  } catch (const std::invalid_argument& e) {
    err << e.what() << "\n";
    return kExitConfig;
  }
  bool ok = true;
  for (const auto& c : res) ok = ok && c.pass;
  if (json) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& c : res)
      arr.push_back({{"suite", c.suite}, {"check", c.name}, {"value", std::isfinite(c.value) ? nlohmann::json(c.value) : nlohmann::json()},
                     {"threshold", c.boolean ? nlohmann::json() : nlohmann::json(c.threshold)}, {"pass", c.pass}});
    out << nlohmann::json{{"pass", ok}, {"checks", arr}}.dump(2) << "\n";
  } else {
    for (const auto& c : res) {
      out << (c.pass ? "PASS " : "FAIL ") << std::left << std::setw(22) << c.suite << std::setw(40) << c.name;
      if (c.boolean) out << (c.value != 0.0 ? "holds" : "violated") << "\n";
      else out << std::scientific << std::setprecision(3) << c.value << " < " << c.threshold << std::defaultfloat << "\n";
    }
    out << (ok ? "all checks passed" : "some checks failed") << "\n";
  }
  return ok ? kExitOk : kExitConfig;
}

}  // namespace esym
