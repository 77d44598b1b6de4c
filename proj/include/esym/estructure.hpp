#pragma once

#include <Eigen/Dense>

#include <functional>
#include <map>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "esym/expr.hpp"

namespace esym {

class RegionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class FrameError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

using RegionFn = std::function<bool(std::span<const double>)>;

struct Chart {
  std::string name;
  int dim = 0;
  std::vector<std::string> coords;
  RegionFn region;  // empty: whole R^n
  std::string region_text = "R^n";
  std::vector<int> boundary;

  static Chart make(std::string name, std::vector<std::string> coords,
                    std::vector<int> boundary = {}, RegionFn region = {},
                    std::string region_text = "R^n");

  bool contains(std::span<const double> q) const;
  void require(std::span<const double> q) const;
};

enum class Family { b_m, corner, foliation, elliptic, vanishing, custom };

std::string family_name(Family f);

struct EFrame {
  Chart chart;
  int p = 0;
  Family family = Family::custom;
  int family_param = 0;
  std::vector<std::vector<Expr>> anchor;                 // p x n
  std::vector<std::vector<std::vector<Expr>>> C;         // C[i][j][k]
  std::map<int, int> order;                              // boundary coord -> m_b
  std::vector<std::vector<Expr>> sigma;                  // p x n, rho_ib / q_b^m_b on boundary columns

  int n() const { return chart.dim; }
  Eigen::MatrixXd anchor_at(std::span<const double> q) const;
  double structure_at(int i, int j, int k, std::span<const double> q) const;
  // E_i applied to a scalar expression, symbolic
  Expr apply(int i, const Expr& f) const;
  // <df, E_i> numerically from precomputed partials of f
  double apply_value(int i, const std::vector<Expr>& df, std::span<const double> q) const;
};

// Frame builder for user-supplied coefficient fields. Only C[i][j] with i<j is
// read; the rest is filled by skew symmetry.
EFrame make_custom_frame(Chart chart, std::vector<std::vector<Expr>> anchor,
                         std::vector<std::vector<std::vector<Expr>>> upper_C = {},
                         std::map<int, int> order = {});

EFrame make_b_structure(int n, int m);
EFrame make_corner_structure(int n, int k);
EFrame make_foliation_structure(int n, int p);
EFrame make_elliptic_structure();
EFrame make_vanishing_structure();

double bracket_residual(const EFrame& frame, std::span<const double> q, int i, int j);
double jacobi_residual(const EFrame& frame, std::span<const double> q, int i, int j, int k);
int anchor_rank(const EFrame& frame, std::span<const double> q, double tol = 1e-12);

// max |C_ij^k + C_ji^k| over all index triples
double skew_defect(const EFrame& frame, std::span<const double> q);

std::vector<std::string> default_coord_names(int n);

}  // namespace esym
