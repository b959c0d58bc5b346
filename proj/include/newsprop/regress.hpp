#pragma once

// Pooled least squares with absorbed sector effects:
//
//   y = b_pre * (PRE * NEWS) + b_post * (POST * NEWS) + b_x * X + mu_sector + e
//
// Sector effects are removed by subtracting sector means from every column
// (within transformation), then the three slopes are solved by Householder
// QR of the demeaned design.

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "newsprop/panel.hpp"
#include "newsprop/types.hpp"

namespace newsprop {

/// Demeaned design plus the group bookkeeping needed for diagnostics and dof.
struct WithinDesign {
  Eigen::VectorXd y;
  Eigen::MatrixXd x;
  std::vector<std::size_t> group;   // row -> group index
  std::vector<std::size_t> group_size;
  Eigen::VectorXd y_means;          // per group
  Eigen::MatrixXd x_means;          // groups x columns
};

/// Subtracts per-group means from y and each column of x. `group` holds a
/// group index in [0, n_groups) for every row. Throws EngineError(Empty) on
/// zero rows.
WithinDesign demean(const Eigen::VectorXd& y, const Eigen::MatrixXd& x, std::span<const std::size_t> group,
                    std::size_t n_groups);

/// Demeaned design for a panel; columns are PRE*NEWS,
/// POST*NEWS, X. Sector groups are numbered in sorted sector-code order.
WithinDesign within_transform(const Panel& panel);

enum class Covariance { Homoskedastic, HC1 };

struct OlsResult {
  Eigen::VectorXd coef;
  Eigen::MatrixXd cov;
  Eigen::VectorXd residuals;
  double rss = 0.0;
  long dof = 0;
};

/// Least squares on an already demeaned design; dof = rows - groups - columns.
/// Throws EngineError(InsufficientData) if dof <= 0 and
/// EngineError(Collinear) naming the first column that adds no rank.
OlsResult ols_absorbed(const WithinDesign& design, Covariance cov = Covariance::Homoskedastic);

struct FitOptions {
  Covariance covariance = Covariance::Homoskedastic;
};

struct FitResult {
  int w = 1;
  Mode mode = Mode::Own;
  Polarity polarity = Polarity::Positive;
  double beta_pre = 0.0;
  double beta_post = 0.0;
  double beta_x = 0.0;
  double se_pre = 0.0;
  double se_post = 0.0;
  double se_x = 0.0;
  double cov_prepost = 0.0;
  double rss = 0.0;
  std::size_t n_obs = 0;
  long dof = 0;
  double diff = 0.0;
  double diff_se = 0.0;
  double diff_t = 0.0;
  double diff_p = 1.0;
};

struct DiffTest {
  double diff = 0.0;
  double diff_se = 0.0;
  double diff_t = 0.0;
  double diff_p = 1.0;
};

/// Estimates the panel's regression and fills the difference test.
FitResult fit(const Panel& panel, const FitOptions& opts = {});

/// Test of beta_post - beta_pre = 0 with a two-sided Student t p value on
/// fit.dof degrees of freedom. Throws EngineError(DegenerateVariance) when the
/// difference is nonzero but its standard error is zero.
DiffTest diff_test(const FitResult& fit);

/// Two-sided tail probability of Student t with `dof` degrees of freedom.
double student_t_two_sided_p(double t, double dof);

inline constexpr std::string_view kFitHeader =
    "mode,polarity,w,beta_pre,se_pre,beta_post,se_post,beta_x,se_x,diff,diff_se,diff_t,diff_p,n_obs";

std::string fits_to_csv(std::span<const FitResult> fits);

}  // namespace newsprop
