#include "newsprop/regress.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include <boost/math/distributions/students_t.hpp>

#include "newsprop/csv.hpp"

namespace newsprop {

namespace {

// Columns whose scaled QR diagonal falls below this are treated as linear
// combinations of earlier columns.
constexpr double kRankTolerance = 1e-10;

const char* const kColumnNames[] = {"PRE*NEWS", "POST*NEWS", "X"};

std::string column_name(Eigen::Index j) {
  if (j < 3) return kColumnNames[j];
  return "column " + std::to_string(j);
}

}  // namespace

WithinDesign demean(const Eigen::VectorXd& y, const Eigen::MatrixXd& x, std::span<const std::size_t> group,
                    std::size_t n_groups) {
  const auto n = y.size();
  if (n == 0) throw EngineError(ErrorKind::Empty, "empty panel");
  WithinDesign d;
  d.group.assign(group.begin(), group.end());
  d.group_size.assign(n_groups, 0);
  d.y_means = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(n_groups));
  d.x_means = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n_groups), x.cols());
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto g = static_cast<Eigen::Index>(group[static_cast<std::size_t>(i)]);
    ++d.group_size[static_cast<std::size_t>(g)];
    d.y_means(g) += y(i);
    d.x_means.row(g) += x.row(i);
  }
  for (std::size_t g = 0; g < n_groups; ++g) {
    if (d.group_size[g] == 0) continue;
    const double inv = 1.0 / static_cast<double>(d.group_size[g]);
    d.y_means(static_cast<Eigen::Index>(g)) *= inv;
    d.x_means.row(static_cast<Eigen::Index>(g)) *= inv;
  }
  d.y = y;
  d.x = x;
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto g = static_cast<Eigen::Index>(group[static_cast<std::size_t>(i)]);
    if (d.group_size[static_cast<std::size_t>(g)] == 1) {
      // Singleton groups are fully absorbed.
      d.y(i) = 0.0;
      d.x.row(i).setZero();
      continue;
    }
    d.y(i) -= d.y_means(g);
    d.x.row(i) -= d.x_means.row(g);
  }
  return d;
}

WithinDesign within_transform(const Panel& panel) {
  const auto n = static_cast<Eigen::Index>(panel.rows.size());
  if (n == 0) throw EngineError(ErrorKind::Empty, "empty panel");
  std::map<SectorCode, std::size_t> sectors;
  for (const auto& o : panel.rows) sectors.emplace(o.sector, 0);
  std::size_t next = 0;
  for (auto& [code, idx] : sectors) idx = next++;

  Eigen::VectorXd y(n);
  Eigen::MatrixXd x(n, 3);
  std::vector<std::size_t> group(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto& o = panel.rows[static_cast<std::size_t>(i)];
    y(i) = o.y;
    x(i, 0) = o.pre() * o.news_value;
    x(i, 1) = o.post() * o.news_value;
    x(i, 2) = o.market_x;
    group[static_cast<std::size_t>(i)] = sectors.at(o.sector);
  }
  return demean(y, x, group, sectors.size());
}

OlsResult ols_absorbed(const WithinDesign& d, Covariance cov) {
  const auto n = d.x.rows();
  const auto k = d.x.cols();
  std::size_t groups = 0;
  for (auto s : d.group_size) groups += s > 0 ? 1 : 0;
  const long dof = static_cast<long>(n) - static_cast<long>(groups) - static_cast<long>(k);
  if (dof <= 0) {
    throw EngineError(ErrorKind::InsufficientData,
                      "insufficient data: " + std::to_string(n) + " rows, " + std::to_string(groups) +
                          " absorbed groups, " + std::to_string(k) + " regressors");
  }

  // Rank check on unit-norm columns, adding one column at a time.
  Eigen::MatrixXd scaled = d.x;
  for (Eigen::Index j = 0; j < k; ++j) {
    const double norm = scaled.col(j).norm();
    if (norm == 0.0) {
      throw EngineError(ErrorKind::Collinear, "collinear design: column " + column_name(j) + " is zero after demeaning");
    }
    scaled.col(j) /= norm;
  }
  for (Eigen::Index j = 1; j <= k; ++j) {
    Eigen::HouseholderQR<Eigen::MatrixXd> probe(scaled.leftCols(j));
    const double diag = std::abs(probe.matrixQR()(j - 1, j - 1));
    if (diag < kRankTolerance) {
      throw EngineError(ErrorKind::Collinear, "collinear design: column " + column_name(j - 1) +
                                                  " is a combination of earlier columns");
    }
  }

  Eigen::HouseholderQR<Eigen::MatrixXd> qr(d.x);
  OlsResult r;
  r.coef = qr.solve(d.y);
  r.residuals = d.y - d.x * r.coef;
  r.rss = r.residuals.squaredNorm();
  r.dof = dof;

  const Eigen::MatrixXd rmat = qr.matrixQR().topLeftCorner(k, k).triangularView<Eigen::Upper>();
  const Eigen::MatrixXd rinv =
      rmat.triangularView<Eigen::Upper>().solve(Eigen::MatrixXd::Identity(k, k));
  const Eigen::MatrixXd bread = rinv * rinv.transpose();  // (X'X)^-1

  if (cov == Covariance::Homoskedastic) {
    r.cov = (r.rss / static_cast<double>(dof)) * bread;
  } else {
    Eigen::MatrixXd meat = Eigen::MatrixXd::Zero(k, k);
    for (Eigen::Index i = 0; i < n; ++i) {
      const double e2 = r.residuals(i) * r.residuals(i);
      meat.noalias() += e2 * d.x.row(i).transpose() * d.x.row(i);
    }
    r.cov = (static_cast<double>(n) / static_cast<double>(dof)) * bread * meat * bread;
  }
  return r;
}

double student_t_two_sided_p(double t, double dof) {
  if (!std::isfinite(t)) return 0.0;
  const boost::math::students_t dist(dof);
  return std::clamp(2.0 * boost::math::cdf(boost::math::complement(dist, std::abs(t))), 0.0, 1.0);
}

DiffTest diff_test(const FitResult& f) {
  DiffTest d;
  d.diff = f.beta_post - f.beta_pre;
  const double var = f.se_pre * f.se_pre + f.se_post * f.se_post - 2.0 * f.cov_prepost;
  d.diff_se = std::sqrt(std::max(0.0, var));
  if (d.diff_se == 0.0) {
    if (d.diff != 0.0) throw EngineError(ErrorKind::DegenerateVariance, "difference has zero standard error");
    d.diff_t = 0.0;
    d.diff_p = 1.0;
    return d;
  }
  d.diff_t = d.diff / d.diff_se;
  d.diff_p = student_t_two_sided_p(d.diff_t, static_cast<double>(f.dof));
  return d;
}

FitResult fit(const Panel& panel, const FitOptions& opts) {
  const auto design = within_transform(panel);
  const auto ols = ols_absorbed(design, opts.covariance);
  FitResult f;
  f.w = panel.w;
  f.mode = panel.mode;
  f.polarity = panel.polarity;
  f.beta_pre = ols.coef(0);
  f.beta_post = ols.coef(1);
  f.beta_x = ols.coef(2);
  f.se_pre = std::sqrt(std::max(0.0, ols.cov(0, 0)));
  f.se_post = std::sqrt(std::max(0.0, ols.cov(1, 1)));
  f.se_x = std::sqrt(std::max(0.0, ols.cov(2, 2)));
  f.cov_prepost = ols.cov(0, 1);
  f.rss = ols.rss;
  f.n_obs = panel.rows.size();
  f.dof = ols.dof;
  const auto d = diff_test(f);
  f.diff = d.diff;
  f.diff_se = d.diff_se;
  f.diff_t = d.diff_t;
  f.diff_p = d.diff_p;
  return f;
}

std::string fits_to_csv(std::span<const FitResult> fits) {
  std::string out(kFitHeader);
  out += '\n';
  using csv::format_double;
  for (const auto& f : fits) {
    out += std::string(to_string(f.mode)) + "," + std::string(to_string(f.polarity)) + "," + std::to_string(f.w) +
           "," + format_double(f.beta_pre) + "," + format_double(f.se_pre) + "," + format_double(f.beta_post) + "," +
           format_double(f.se_post) + "," + format_double(f.beta_x) + "," + format_double(f.se_x) + "," +
           format_double(f.diff) + "," + format_double(f.diff_se) + "," + format_double(f.diff_t) + "," +
           format_double(f.diff_p) + "," + std::to_string(f.n_obs) + "\n";
  }
  return out;
}

}  // namespace newsprop
