#include "esym/estructure.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace esym {

std::vector<std::string> default_coord_names(int n) {
  std::vector<std::string> out;
  for (int i = 1; i <= n; ++i) out.push_back("q" + std::to_string(i));
  return out;
}

Chart Chart::make(std::string name, std::vector<std::string> coords, std::vector<int> boundary,
                  RegionFn region, std::string region_text) {
  Chart c;
  c.name = std::move(name);
  c.dim = static_cast<int>(coords.size());
  if (c.dim < 1) throw FrameError("chart needs at least one coordinate");
  std::set<std::string> seen(coords.begin(), coords.end());
  if (seen.size() != coords.size()) throw FrameError("chart coordinate names must be distinct");
  for (int b : boundary)
    if (b < 0 || b >= c.dim)
      throw FrameError("boundary index " + std::to_string(b) + " outside [0, " +
                       std::to_string(c.dim) + ")");
  c.coords = std::move(coords);
  c.boundary = std::move(boundary);
  c.region = std::move(region);
  c.region_text = std::move(region_text);
  return c;
}

bool Chart::contains(std::span<const double> q) const {
  if (static_cast<int>(q.size()) < dim) return false;
  for (int i = 0; i < dim; ++i)
    if (!std::isfinite(q[static_cast<std::size_t>(i)])) return false;
  return !region || region(q);
}

void Chart::require(std::span<const double> q) const {
  if (contains(q)) return;
  std::string pt;
  for (int i = 0; i < dim && i < static_cast<int>(q.size()); ++i)
    pt += (i ? ", " : "") + std::to_string(q[static_cast<std::size_t>(i)]);
  throw RegionError("point (" + pt + ") outside region " + region_text + " of chart " + name);
}

std::string family_name(Family f) {
  switch (f) {
    case Family::b_m: return "b_m";
    case Family::corner: return "corner";
    case Family::foliation: return "foliation";
    case Family::elliptic: return "elliptic";
    case Family::vanishing: return "vanishing";
    case Family::custom: return "custom";
  }
  return "custom";
}

Eigen::MatrixXd EFrame::anchor_at(std::span<const double> q) const {
  chart.require(q);
  Eigen::MatrixXd r(p, n());
  for (int i = 0; i < p; ++i)
    for (int j = 0; j < n(); ++j) r(i, j) = anchor[i][j].eval(q);
  return r;
}

double EFrame::structure_at(int i, int j, int k, std::span<const double> q) const {
  chart.require(q);
  return C[i][j][k].eval(q);
}

Expr EFrame::apply(int i, const Expr& f) const {
  Expr out(0.0);
  for (int j = 0; j < n(); ++j) {
    if (anchor[i][j].is_const(0.0)) continue;
    out = out + anchor[i][j] * f.diff(j);
  }
  return out;
}

double EFrame::apply_value(int i, const std::vector<Expr>& df, std::span<const double> q) const {
  double s = 0.0;
  for (int j = 0; j < n(); ++j) {
    const Expr& r = anchor[i][j];
    if (r.is_const(0.0) || df[j].is_const(0.0)) continue;
    s += r.eval(q) * df[j].eval(q);
  }
  return s;
}

namespace {

Expr limit_sigma(const Expr& rho, int b, int m) {
  OpaqueFn fn;
  fn.name = "sigma(" + rho.str() + ")";
  fn.f = [rho, b, m](std::span<const double> x) {
    std::vector<double> y(x.begin(), x.end());
    const auto bi = static_cast<std::size_t>(b);
    const double qb = y[bi];
    if (std::abs(qb) > 1e-6) return rho.eval(y) / std::pow(qb, m);
    // symmetric two-sided samples with one Richardson step
    auto at = [&](double h) {
      y[bi] = h;
      const double a = rho.eval(y) / std::pow(h, m);
      y[bi] = -h;
      const double c = rho.eval(y) / std::pow(-h, m);
      return 0.5 * (a + c);
    };
    const double h = 1e-3;
    return (4.0 * at(h / 2) - at(h)) / 3.0;
  };
  return Expr::opaque(std::move(fn));
}

void check_sizes(const EFrame& f) {
  if (f.p < 1) throw FrameError("frame needs at least one generator");
  if (static_cast<int>(f.anchor.size()) != f.p) throw FrameError("anchor must have p rows");
  for (const auto& row : f.anchor)
    if (static_cast<int>(row.size()) != f.n()) throw FrameError("anchor rows must have n entries");
}

}  // namespace

EFrame make_custom_frame(Chart chart, std::vector<std::vector<Expr>> anchor,
                         std::vector<std::vector<std::vector<Expr>>> upper_C,
                         std::map<int, int> order) {
  EFrame f;
  f.chart = std::move(chart);
  f.p = static_cast<int>(anchor.size());
  f.anchor = std::move(anchor);
  check_sizes(f);
  const int p = f.p;
  f.C.assign(p, std::vector<std::vector<Expr>>(p, std::vector<Expr>(p, Expr(0.0))));
  if (!upper_C.empty()) {
    if (static_cast<int>(upper_C.size()) != p) throw FrameError("structure array must be p x p x p");
    for (int i = 0; i < p; ++i) {
      if (static_cast<int>(upper_C[i].size()) != p) throw FrameError("structure array must be p x p x p");
      for (int j = i + 1; j < p; ++j) {
        if (static_cast<int>(upper_C[i][j].size()) != p)
          throw FrameError("structure array must be p x p x p");
        for (int k = 0; k < p; ++k) {
          f.C[i][j][k] = upper_C[i][j][k];
          f.C[j][i][k] = -upper_C[i][j][k];
        }
      }
    }
  }
  for (int b : f.chart.boundary)
    if (!order.count(b)) order[b] = 1;
  for (auto [b, m] : order) {
    if (std::find(f.chart.boundary.begin(), f.chart.boundary.end(), b) == f.chart.boundary.end())
      throw FrameError("order given for non-boundary coordinate " + std::to_string(b));
    if (m < 1) throw FrameError("boundary order must be >= 1");
  }
  f.order = std::move(order);
  f.sigma.assign(p, std::vector<Expr>(f.n(), Expr(0.0)));
  for (auto [b, m] : f.order) {
    for (int i = 0; i < p; ++i) {
      Expr s;
      if (divide_by_power(f.anchor[i][b], b, m, s)) f.sigma[i][b] = s;
      else f.sigma[i][b] = limit_sigma(f.anchor[i][b], b, m);
    }
  }
  return f;
}

EFrame make_b_structure(int n, int m) {
  if (n < 1) throw FrameError("b-structure needs n >= 1");
  if (m < 1) throw FrameError("b-structure needs m >= 1");
  std::vector<std::vector<Expr>> a(n, std::vector<Expr>(n, Expr(0.0)));
  a[0][0] = m == 1 ? Expr::var(0) : pow(Expr::var(0), Expr(static_cast<double>(m)));
  for (int i = 1; i < n; ++i) a[i][i] = Expr(1.0);
  EFrame f = make_custom_frame(Chart::make("b" + std::to_string(m), default_coord_names(n), {0}),
                               std::move(a), {}, {{0, m}});
  f.family = Family::b_m;
  f.family_param = m;
  return f;
}

EFrame make_corner_structure(int n, int k) {
  if (n < 1 || k < 1 || k > n) throw FrameError("corner structure needs 1 <= k <= n");
  std::vector<std::vector<Expr>> a(n, std::vector<Expr>(n, Expr(0.0)));
  std::vector<int> bd;
  std::map<int, int> ord;
  for (int i = 0; i < n; ++i) {
    if (i < k) {
      a[i][i] = Expr::var(i);
      bd.push_back(i);
      ord[i] = 1;
    } else {
      a[i][i] = Expr(1.0);
    }
  }
  EFrame f = make_custom_frame(Chart::make("corner" + std::to_string(k), default_coord_names(n), bd),
                               std::move(a), {}, ord);
  f.family = Family::corner;
  f.family_param = k;
  return f;
}

EFrame make_foliation_structure(int n, int p) {
  if (n < 1 || p < 1 || p > n) throw FrameError("foliation structure needs 1 <= p <= n");
  std::vector<std::vector<Expr>> a(p, std::vector<Expr>(n, Expr(0.0)));
  for (int i = 0; i < p; ++i) a[i][i] = Expr(1.0);
  EFrame f = make_custom_frame(Chart::make("foliation" + std::to_string(p), default_coord_names(n)),
                               std::move(a));
  f.family = Family::foliation;
  f.family_param = p;
  return f;
}

EFrame make_elliptic_structure() {
  const Expr x = Expr::var(0), y = Expr::var(1);
  std::vector<std::vector<Expr>> a = {{x, y}, {-y, x}};
  EFrame f = make_custom_frame(Chart::make("elliptic", {"x", "y"}), std::move(a));
  f.family = Family::elliptic;
  return f;
}

EFrame make_vanishing_structure() {
  const Expr x = Expr::var(0);
  std::vector<std::vector<Expr>> a = {{x, Expr(0.0)}, {Expr(0.0), x}};
  std::vector<std::vector<std::vector<Expr>>> c(
      2, std::vector<std::vector<Expr>>(2, std::vector<Expr>(2, Expr(0.0))));
  c[0][1][1] = Expr(1.0);
  EFrame f = make_custom_frame(Chart::make("vanishing", {"x", "y"}, {0}), std::move(a), c, {{0, 1}});
  f.family = Family::vanishing;
  return f;
}

double bracket_residual(const EFrame& frame, std::span<const double> q, int i, int j) {
  frame.chart.require(q);
  if (i < 0 || j < 0 || i >= frame.p || j >= frame.p) throw FrameError("generator index out of range");
  double s2 = 0.0;
  for (int k = 0; k < frame.n(); ++k) {
    Expr comm = frame.apply(i, frame.anchor[j][k]) - frame.apply(j, frame.anchor[i][k]);
    double v = comm.eval(q);
    for (int m = 0; m < frame.p; ++m) v -= frame.C[i][j][m].eval(q) * frame.anchor[m][k].eval(q);
    if (!std::isfinite(v)) throw RegionError("non-finite commutator at sampled point");
    s2 += v * v;
  }
  return std::sqrt(s2);
}

double jacobi_residual(const EFrame& frame, std::span<const double> q, int i, int j, int k) {
  frame.chart.require(q);
  const int p = frame.p;
  if (std::min({i, j, k}) < 0 || std::max({i, j, k}) >= p)
    throw FrameError("generator index out of range");
  const int cyc[3][3] = {{i, j, k}, {j, k, i}, {k, i, j}};
  double s2 = 0.0;
  for (int m = 0; m < p; ++m) {
    double r = 0.0;
    for (const auto& t : cyc) {
      for (int l = 0; l < p; ++l) r += frame.C[t[0]][t[1]][l].eval(q) * frame.C[l][t[2]][m].eval(q);
      r -= frame.apply(t[2], frame.C[t[0]][t[1]][m]).eval(q);
    }
    s2 += r * r;
  }
  return std::sqrt(s2);
}

int anchor_rank(const EFrame& frame, std::span<const double> q, double tol) {
  Eigen::FullPivLU<Eigen::MatrixXd> lu(frame.anchor_at(q));
  lu.setThreshold(tol);
  return static_cast<int>(lu.rank());
}

double skew_defect(const EFrame& frame, std::span<const double> q) {
  double worst = 0.0;
  for (int i = 0; i < frame.p; ++i)
    for (int j = 0; j < frame.p; ++j)
      for (int k = 0; k < frame.p; ++k)
        worst = std::max(worst, std::abs(frame.C[i][j][k].eval(q) + frame.C[j][i][k].eval(q)));
  return worst;
}

}  // namespace esym
