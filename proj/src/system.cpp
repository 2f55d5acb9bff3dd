#include "regretctl/system.hpp"

#include <Eigen/Eigenvalues>
#include <string>

#include "regretctl/errors.hpp"
#include "regretctl/factorization.hpp"

namespace regretctl {

namespace {

void check_shape(const Eigen::MatrixXd& m, Eigen::Index rows, Eigen::Index cols,
                 const std::string& name) {
  if (m.rows() != rows || m.cols() != cols) {
    throw InputError("SystemInstance: " + name + " has shape " + std::to_string(m.rows()) +
                     "x" + std::to_string(m.cols()) + ", expected " + std::to_string(rows) +
                     "x" + std::to_string(cols));
  }
  if (!m.allFinite()) throw InputError("SystemInstance: " + name + " has non-finite entries");
}

void check_psd(const Eigen::MatrixXd& m, const std::string& name) {
  try {
    psd_factor(m);
  } catch (const std::exception&) {
    throw InputError("SystemInstance: " + name + " is not positive semidefinite");
  }
}

void check_pd(const Eigen::MatrixXd& m, const std::string& name) {
  try {
    chol_forward(m);
  } catch (const std::exception&) {
    throw InputError("SystemInstance: " + name + " is not positive definite");
  }
}

}  // namespace

void SystemInstance::validate() const {
  const int t_len = horizon;
  if (t_len < 1) throw InputError("SystemInstance: horizon must be >= 1");
  auto expect_count = [&](std::size_t got, std::size_t want, const char* name) {
    if (got != want) {
      throw InputError(std::string("SystemInstance: ") + name + " has " + std::to_string(got) +
                       " entries, expected " + std::to_string(want));
    }
  };
  expect_count(a.size(), static_cast<std::size_t>(t_len), "A");
  expect_count(b_u.size(), static_cast<std::size_t>(t_len), "Bu");
  expect_count(b_w.size(), static_cast<std::size_t>(t_len), "Bw");
  expect_count(c.size(), static_cast<std::size_t>(t_len), "C");
  expect_count(q.size(), static_cast<std::size_t>(t_len - 1), "Q");
  expect_count(r.size(), static_cast<std::size_t>(t_len), "R");

  const Eigen::Index n = a.front().rows();
  const Eigen::Index m = b_u.front().cols();
  const Eigen::Index n_w = b_w.front().cols();
  const Eigen::Index p = c.front().rows();
  if (n < 1 || m < 1 || n_w < 1 || p < 1) {
    throw InputError("SystemInstance: all dimensions must be >= 1");
  }

  for (int t = 0; t < t_len; ++t) {
    const std::string at = "[t=" + std::to_string(t) + "]";
    check_shape(a[t], n, n, "A" + at);
    check_shape(b_u[t], n, m, "Bu" + at);
    check_shape(b_w[t], n, n_w, "Bw" + at);
    check_shape(c[t], p, n, "C" + at);
    check_shape(r[t], m, m, "R" + at);
    check_pd(r[t], "R[t=" + std::to_string(t) + "]");
  }
  for (int t = 1; t < t_len; ++t) {
    check_shape(q[t - 1], n, n, "Q[t=" + std::to_string(t) + "]");
    check_psd(q[t - 1], "Q[t=" + std::to_string(t) + "]");
  }
  check_shape(q_terminal, n, n, "QT");
  check_psd(q_terminal, "QT");
}

SystemInstance SystemInstance::lti(int horizon, const Eigen::MatrixXd& a,
                                   const Eigen::MatrixXd& b_u, const Eigen::MatrixXd& b_w,
                                   const Eigen::MatrixXd& c, const Eigen::MatrixXd& q,
                                   const Eigen::MatrixXd& q_terminal,
                                   const Eigen::MatrixXd& r) {
  SystemInstance sys;
  sys.horizon = horizon;
  const std::size_t t_len = horizon > 0 ? static_cast<std::size_t>(horizon) : 0;
  sys.a.assign(t_len, a);
  sys.b_u.assign(t_len, b_u);
  sys.b_w.assign(t_len, b_w);
  sys.c.assign(t_len, c);
  sys.q.assign(t_len > 0 ? t_len - 1 : 0, q);
  sys.q_terminal = q_terminal;
  sys.r.assign(t_len, r);
  sys.validate();
  return sys;
}

}  // namespace regretctl
