#include "esym/scenarios.hpp"

#include <cmath>
#include <memory>
#include <stdexcept>

namespace esym {

double ScenarioParams::get(const std::string& k, double fallback) const {
  auto it = num.find(k);
  return it == num.end() ? fallback : it->second;
}

std::string ScenarioParams::get(const std::string& k, const std::string& fallback) const {
  auto it = str.find(k);
  return it == str.end() ? fallback : it->second;
}

bool ScenarioSpec::in_region(std::span<const double> x) const {
  return base_frame().chart.contains(x);
}

std::vector<double> ScenarioSpec::velocity(std::span<const double> x, BivectorMutation mutation) const {
  if (gauge) return wong_field(hamiltonian, *gauge, x, mutation);
  const auto X = hamiltonian_field(hamiltonian, phase, x);
  return pushforward_velocity(phase, x, X);
}

OdeSystem ScenarioSpec::system(BivectorMutation mutation) const {
  auto self = std::make_shared<const ScenarioSpec>(*this);
  OdeSystem sys;
  sys.dim = state_size();
  sys.state_names = state_names;
  sys.field = [self, mutation](std::span<const double> x, std::span<double> dx) {
    const auto v = self->velocity(x, mutation);
    std::copy(v.begin(), v.end(), dx.begin());
  };
  sys.region = [self](std::span<const double> x) { return self->in_region(x); };
  sys.monitors.push_back({"energy", [self](std::span<const double> x) { return self->hamiltonian.eval(x); }});
  const EFrame& bf = base_frame();
  for (int b : bf.chart.boundary)
    sys.monitors.push_back({"bdist_" + bf.chart.coords[static_cast<std::size_t>(b)],
                            [b](std::span<const double> x) { return x[static_cast<std::size_t>(b)]; }});
  if (gauge) {
    const int off = gauge->n() + gauge->p();
    const int d = gauge->d();
    if (gauge->algebra.abelian()) {
      for (int a = 0; a < d; ++a) {
        sys.monitors.push_back({"charge_" + std::to_string(a + 1),
                                [off, a](std::span<const double> x) { return x[static_cast<std::size_t>(off + a)]; }});
        sys.frozen.push_back(off + a);
      }
    } else {
      sys.monitors.push_back({"casimir_norm", [off, d](std::span<const double> x) {
                                double s = 0.0;
                                for (int a = 0; a < d; ++a) s += x[static_cast<std::size_t>(off + a)] * x[static_cast<std::size_t>(off + a)];
                                return std::sqrt(s);
                              }});
    }
  }
  for (const auto& m : extra_monitors) sys.monitors.push_back(m);
  return sys;
}

std::vector<std::string> scenario_names() {
  return {"radko_sphere", "radko_sphere_geodesic", "lorentz_plane", "mcgehee_3bp",
          "penrose_blackhole", "minkowski_foliation", "wong_u1_plane", "wong_so3_b"};
}

ScenarioSpec make_scenario(const std::string& name, const ScenarioParams& params) {
  if (name == "radko_sphere") return scenario_radko_sphere(params);
  if (name == "radko_sphere_geodesic") return scenario_radko_sphere_geodesic(params);
  if (name == "lorentz_plane") return scenario_lorentz_plane(params);
  if (name == "mcgehee_3bp") return scenario_mcgehee_3bp(params);
  if (name == "penrose_blackhole") return scenario_penrose_blackhole(params);
  if (name == "minkowski_foliation") return scenario_minkowski_foliation(params);
  if (name == "wong_u1_plane") return scenario_wong_u1_plane(params);
  if (name == "wong_so3_b") return scenario_wong_so3_b(params);
  throw std::invalid_argument("unknown scenario '" + name + "'");
}

namespace {

EFrame b_frame_named(const std::string& chart, std::vector<std::string> coords, RegionFn region,
                     std::string region_text) {
  const int n = static_cast<int>(coords.size());
  EFrame f = make_b_structure(n, 1);
  f.chart = Chart::make(chart, std::move(coords), {0}, std::move(region), std::move(region_text));
  return f;
}

EForm area_form() {
  EForm w;
  w.degree = 2;
  w.coeffs[{0, 1}] = Expr(1.0);
  return w;
}

std::vector<double> initial(const ScenarioParams& p, const std::vector<std::string>& names,
                            std::vector<double> def) {
  for (std::size_t i = 0; i < names.size(); ++i) def[i] = p.get("x0_" + names[i], def[i]);
  return def;
}

}  // namespace

ScenarioSpec scenario_radko_sphere(const ScenarioParams& params) {
  ScenarioSpec s;
  s.name = "radko_sphere";
  s.provenance = "b-symplectic sphere: omega = dh/h ^ dtheta, rotation with moment map log|h|";
  s.params = params;
  EFrame f = b_frame_named("radko", {"h", "theta"},
                           [](std::span<const double> x) { return std::abs(x[0]) < 1.0; }, "|h| < 1");
  s.phase = symplectic_manifold(f, area_form());
  s.hamiltonian = EFunction(Expr(0.0), 2, {{0, 1.0}});
  s.action = ActionGenerator{{Expr(0.0), Expr(1.0)}, "rotation"};
  s.moment = EFunction(Expr(0.0), 2, {{0, 1.0}});
  s.state_names = s.phase.names;
  s.x0 = initial(params, s.state_names, {0.5, 1.0});
  return s;
}

ScenarioSpec scenario_radko_sphere_geodesic(const ScenarioParams& params) {
  ScenarioSpec s;
  s.name = "radko_sphere_geodesic";
  s.provenance = "b-cotangent geodesic flow on the b-sphere chart with metric (dh/h)^2 + (1 + h^2) dtheta^2";
  s.params = params;
  EFrame f = b_frame_named("radko", {"h", "theta"},
                           [](std::span<const double> x) { return std::abs(x[0]) < 1.0; }, "|h| < 1");
  const Expr h = Expr::var(0);
  EMetric g(f, {{Expr(1.0), Expr(0.0)}, {Expr(0.0), Expr(1.0) + h * h}});
  s.metric = g;
  s.phase = cotangent_bundle(f);
  s.hamiltonian = kinetic_efunction(g);
  s.state_names = s.phase.names;
  s.x0 = initial(params, s.state_names, {0.5, 1.0, -0.3, 0.5});
  return s;
}

ScenarioSpec scenario_lorentz_plane(const ScenarioParams& params) {
  ScenarioSpec s;
  s.name = "lorentz_plane";
  s.provenance = "space of oriented geodesics of the Lorentz plane: omega = (1/eps) deps ^ du";
  s.params = params;
  EFrame f = b_frame_named("lorentz", {"eps", "u"}, {}, "R^2");
  s.phase = symplectic_manifold(f, area_form());
  s.hamiltonian = EFunction(Expr::var(1), 2);
  s.state_names = s.phase.names;
  s.x0 = initial(params, s.state_names, {0.5, 0.2});
  return s;
}

ScenarioSpec scenario_mcgehee_3bp(const ScenarioParams& params) {
  ScenarioSpec s;
  s.name = "mcgehee_3bp";
  s.provenance = "McGehee compactification r = 2/x^2 of the planar restricted three-body problem (b^3 boundary at x = 0)";
  s.params = params;
  const Expr x = Expr::var(0), al = Expr::var(1);
  Chart c = Chart::make("mcgehee", {"x", "alpha"}, {0},
                        [](std::span<const double> q) { return q[0] >= 0.0; }, "x >= 0");
  EFrame f = make_custom_frame(c, {{Expr(-0.25) * pow(x, Expr(3.0)), Expr(0.0)}, {Expr(0.0), Expr(1.0)}},
                               {}, {{0, 3}});
  f.family = Family::b_m;
  f.family_param = 3;
  s.phase = cotangent_bundle(f, {"P_r", "P_alpha"});
  const Expr pr = Expr::var(2), pa = Expr::var(3);
  const std::string pot = params.get("potential", std::string("cr3bp"));
  const double mu = params.get("mu", 0.1);
  Expr U(0.0);
  if (pot == "kepler") {
    U = Expr(params.get("k", 1.0)) * x * x / Expr(2.0);
  } else if (pot == "cr3bp") {
    // primaries of mass 1-mu at -mu and mu at 1-mu on the rotating axis
    const double masses[2] = {1.0 - mu, mu};
    const double pos[2] = {-mu, 1.0 - mu};
    for (int k = 0; k < 2; ++k) {
      const Expr a(pos[k]);
      Expr rad = Expr(1.0) - a * x * x * cos(al) + a * a * pow(x, Expr(4.0)) / Expr(4.0);
      U = U + Expr(masses[k]) * (x * x / Expr(2.0)) / sqrt(rad);
    }
  } else if (pot != "none") {
    throw std::invalid_argument("unknown potential '" + pot + "' (kepler, cr3bp, none)");
  }
  Expr H = pr * pr / Expr(2.0) + pow(x, Expr(4.0)) * pa * pa / Expr(8.0) - U;
  s.hamiltonian = EFunction(H, 4);
  s.state_names = s.phase.names;
  s.x0 = initial(params, s.state_names, {0.8, 0.0, 0.3, 1.0});
  return s;
}

Expr penrose_h(double M) {
  const Expr a = Expr::var(0), b = Expr::var(1);
  return Expr(1.0) - Expr(4.0 * M) * sin(a) / (cos(a) - tan(b) * sin(a));
}

EMetric penrose_metric(double M) {
  const Expr a = Expr::var(0), b = Expr::var(1);
  const Expr h = penrose_h(M);
  const Expr dm = Expr(1.0) / h - h;
  const Expr dp = Expr(1.0) / h + h;
  const Expr s2 = pow(sinc(a), Expr(-2.0));  // a^2 csc^2 a
  const Expr sb2 = pow(sec(b), Expr(2.0));
  const Expr q(0.25);
  Chart c = Chart::make(
      "penrose", {"alpha", "beta"}, {0},
      [M](std::span<const double> x) {
        const double a = x[0], be = x[1];
        if (!(a >= 0.0 && a < M_PI / 2 && std::abs(be) < M_PI / 2)) return false;
        return std::cos(a) - (std::tan(be) + 4.0 * M) * std::sin(a) > 0.0;
      },
      "alpha >= 0, |beta| < pi/2, cos(alpha) > (tan(beta) + 4M) sin(alpha)");
  EFrame f = make_custom_frame(c, {{a * a, Expr(0.0)}, {Expr(0.0), Expr(1.0)}}, {}, {{0, 2}});
  f.family = Family::b_m;
  f.family_param = 2;
  return EMetric(f,
                 {{q * dm * s2 * s2, -(q * dp * s2 * sb2)}, {-(q * dp * s2 * sb2), q * dm * sb2 * sb2}},
                 1);
}

ScenarioSpec scenario_penrose_blackhole(const ScenarioParams& params) {
  ScenarioSpec s;
  s.name = "penrose_blackhole";
  s.provenance = "Penrose-compactified Schwarzschild exterior, radial-temporal reduced metric near the corner, optional u(1) coupling";
  s.params = params;
  const double M = params.get("M", 1.0);
  if (!(M > 0)) throw std::invalid_argument("penrose_blackhole needs M > 0");
  EMetric g = penrose_metric(M);
  s.metric = g;
  s.phase = cotangent_bundle(g.frame, {"p_alpha", "p_beta"});
  s.hamiltonian = kinetic_efunction(g);
  s.state_names = s.phase.names;
  std::vector<double> def = {0.1, -0.3, 0.2, 0.1};
  if (params.get("gauge", std::string("none")) == "u1") {
    const std::vector<std::string> cn = g.frame.chart.coords;
    const Expr A1 = parse(params.get("A1", std::string("0")), cn);
    const Expr A2 = parse(params.get("A2", std::string("0.1*sin(beta)")), cn);
    s.gauge = GaugeData(LieAlgebra::u1(), g.frame, {{A1}, {A2}});
    s.state_names.push_back("O1");
    def.push_back(1.0);
  }
  s.x0 = initial(params, s.state_names, def);
  return s;
}

ScenarioSpec scenario_minkowski_foliation(const ScenarioParams& params) {
  ScenarioSpec s;
  s.name = "minkowski_foliation";
  s.provenance = "Minkowski space foliated by leaves of fixed z, flat metric diag(-1,1,1) along the leaves";
  s.params = params;
  EFrame f = make_foliation_structure(4, 3);
  f.chart = Chart::make("minkowski", {"t", "x", "y", "z"});
  EMetric g(f, {{Expr(-1.0), Expr(0.0), Expr(0.0)}, {Expr(0.0), Expr(1.0), Expr(0.0)},
                {Expr(0.0), Expr(0.0), Expr(1.0)}},
            1);
  s.metric = g;
  s.phase = cotangent_bundle(f);
  s.hamiltonian = kinetic_efunction(g);
  s.state_names = s.phase.names;
  const std::string cls = params.get("class", std::string("timelike"));
  std::vector<double> m;
  if (cls == "timelike") m = {-1.0, 0.3, 0.2};
  else if (cls == "null") m = {-0.5, 0.3, 0.4};
  else if (cls == "spacelike") m = {-0.2, 0.6, 0.5};
  else throw std::invalid_argument("class must be timelike, null or spacelike");
  s.x0 = initial(params, s.state_names, {0.0, 0.0, 0.0, 0.5, m[0], m[1], m[2]});
  // g(v, v) with v the leaf velocity 2 g^{-1} m
  s.extra_monitors.push_back({"gvv", [](std::span<const double> x) {
                                const double v0 = -2.0 * x[4], v1 = 2.0 * x[5], v2 = 2.0 * x[6];
                                return -v0 * v0 + v1 * v1 + v2 * v2;
                              }});
  return s;
}

ScenarioSpec scenario_wong_u1_plane(const ScenarioParams& params) {
  ScenarioSpec s;
  s.name = "wong_u1_plane";
  s.provenance = "charged particle in a constant magnetic field: u(1) connection A = (0, B x) on the flat plane";
  s.params = params;
  EFrame f = make_foliation_structure(2, 2);
  f.chart = Chart::make("plane", {"x", "y"});
  const double B = params.get("B", 1.0);
  s.gauge = GaugeData(LieAlgebra::u1(), f, {{Expr(0.0)}, {Expr(B) * Expr::var(0)}});
  s.phase = cotangent_bundle(f);
  const Expr m1 = Expr::var(2), m2 = Expr::var(3);
  s.hamiltonian = EFunction(m1 * m1 + m2 * m2, 4);
  s.state_names = {"x", "y", "m1", "m2", "O1"};
  s.x0 = initial(params, s.state_names, {0.0, 0.0, 1.0, 0.0, 1.0});
  return s;
}

ScenarioSpec scenario_wong_so3_b(const ScenarioParams& params) {
  ScenarioSpec s;
  s.name = "wong_so3_b";
  s.provenance = "Wong particle with so(3) charge over a b-manifold: q1 d/dq1, d/dq2 frame";
  s.params = params;
  EFrame f = make_b_structure(2, 1);
  const Expr q1 = Expr::var(0), q2 = Expr::var(1);
  std::vector<std::vector<Expr>> A = {
      {Expr(0.3) * q2, Expr(0.1), Expr(0.2) * q1 * q2},
      {Expr(0.0), Expr(0.4) * q1, Expr(0.5) * sin(q1)}};
  s.gauge = GaugeData(LieAlgebra::so3(), f, A);
  s.phase = cotangent_bundle(f);
  const Expr m1 = Expr::var(2), m2 = Expr::var(3);
  s.hamiltonian = EFunction(m1 * m1 + m2 * m2, 4);
  s.state_names = {"q1", "q2", "m1", "m2", "O1", "O2", "O3"};
  s.x0 = initial(params, s.state_names, {0.5, 0.0, 0.2, 0.3, 1.0, 0.5, -0.3});
  return s;
}

CalogeroForms calogero_reduced_hamiltonian(const std::vector<double>& a, const Eigen::MatrixXcd& X) {
  const auto n = static_cast<Eigen::Index>(a.size());
  if (X.rows() != n || X.cols() != n) throw std::invalid_argument("X must be n x n with n = len(a)");
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = i + 1; j < n; ++j)
      if (a[static_cast<std::size_t>(i)] == a[static_cast<std::size_t>(j)])
        throw std::invalid_argument(
            "coincident eigenvalues a_i = a_j: the reduced form does not exist on this stratum");
  if ((X - X.adjoint()).norm() > 1e-12 * std::max(1.0, X.norm()))
    throw std::invalid_argument("X must be Hermitian");
  CalogeroForms out{};
  out.trace = (X * X).trace().real();
  // Hermitian moment map mu = i [diag(a), X]
  const std::complex<double> I(0.0, 1.0);
  Eigen::MatrixXcd mu(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j)
      mu(i, j) = I * (a[static_cast<std::size_t>(i)] - a[static_cast<std::size_t>(j)]) * X(i, j);
  double r = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) r += std::norm(X(i, i));
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) {
      if (i == j) continue;
      const double d = a[static_cast<std::size_t>(i)] - a[static_cast<std::size_t>(j)];
      r += (mu(i, j) * mu(j, i)).real() / (d * d);
    }
  out.reduced = r;
  return out;
}

}  // namespace esym
