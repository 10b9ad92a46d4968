#include "mel/cost_matrix.hpp"

#include <Eigen/Eigenvalues>
#include <sstream>

#include "mel/errors.hpp"

namespace mel {

const char* to_string(MatrixClass c) {
  switch (c) {
    case MatrixClass::Unchecked: return "unchecked";
    case MatrixClass::SemiMetric: return "semi-metric";
    case MatrixClass::Metric: return "metric";
    case MatrixClass::Psd: return "psd";
    case MatrixClass::GraphLaplacian: return "graph-laplacian";
  }
  return "?";
}

std::string ValidationReport::summary() const {
  if (ok) return "ok";
  std::ostringstream out;
  out << violations.size() << " violation(s):";
  std::size_t shown = 0;
  for (const auto& v : violations) {
    out << " [" << v.what << " at (" << v.i << "," << v.j;
    if (v.k >= 0) out << "," << v.k;
    out << ") = " << v.value << "]";
    if (++shown == 5 && violations.size() > 5) {
      out << " ...";
      break;
    }
  }
  return out.str();
}

namespace {

void check_symmetry(const Matrix& m, const Tolerances& tol,
                    ValidationReport& report) {
  for (Index i = 0; i < m.rows(); ++i)
    for (Index j = i + 1; j < m.cols(); ++j) {
      double gap = std::abs(m(i, j) - m(j, i));
      if (gap > tol.symmetry)
        report.violations.push_back({"symmetry", i, j, -1, gap});
    }
}

void check_semi_metric(const Matrix& m, const Tolerances& tol,
                       ValidationReport& report) {
  for (Index i = 0; i < m.rows(); ++i)
    if (std::abs(m(i, i)) > tol.zero_diagonal)
      report.violations.push_back({"diagonal", i, i, -1, m(i, i)});
  for (Index i = 0; i < m.rows(); ++i)
    for (Index j = 0; j < m.cols(); ++j)
      if (i != j && m(i, j) < -tol.nonnegative)
        report.violations.push_back({"negative entry", i, j, -1, m(i, j)});
}

void check_triangle(const Matrix& m, const Tolerances& tol,
                    ValidationReport& report) {
  Index d = m.rows();
  for (Index i = 0; i < d; ++i)
    for (Index j = 0; j < d; ++j)
      for (Index k = 0; k < d; ++k) {
        double slack = m(i, j) - m(i, k) - m(k, j);
        if (slack > tol.triangle) {
          report.violations.push_back({"triangle", i, j, k, slack});
          if (report.violations.size() > 32) return;  // enough evidence
        }
      }
}

void check_psd(const Matrix& m, const Tolerances& tol,
               ValidationReport& report) {
  Eigen::SelfAdjointEigenSolver<Matrix> eig(0.5 * (m + m.transpose()),
                                            Eigen::EigenvaluesOnly);
  double lo = eig.eigenvalues().minCoeff();
  if (lo < -tol.psd) report.violations.push_back({"eigenvalue", -1, -1, -1, lo});
}

void check_graph_laplacian(const Matrix& m, const Tolerances& tol,
                           ValidationReport& report) {
  for (Index i = 0; i < m.rows(); ++i) {
    double row_sum = m.row(i).sum();
    if (std::abs(row_sum) > tol.laplacian_row_sum)
      report.violations.push_back({"row sum", i, -1, -1, row_sum});
    for (Index j = 0; j < m.cols(); ++j)
      if (i != j && m(i, j) > tol.laplacian_offdiag)
        report.violations.push_back({"positive off-diagonal", i, j, -1, m(i, j)});
  }
}

}  // namespace

ValidationReport validate_class(const Matrix& m, MatrixClass tag,
                                const Tolerances& tol) {
  if (m.rows() != m.cols() || m.size() == 0)
    throw InvalidMatrix("validate_class: matrix must be square and non-empty");
  ValidationReport report;
  check_symmetry(m, tol, report);
  switch (tag) {
    case MatrixClass::Unchecked:
      break;
    case MatrixClass::SemiMetric:
      check_semi_metric(m, tol, report);
      break;
    case MatrixClass::Metric:
      check_semi_metric(m, tol, report);
      check_triangle(m, tol, report);
      break;
    case MatrixClass::Psd:
      check_psd(m, tol, report);
      break;
    case MatrixClass::GraphLaplacian:
      check_graph_laplacian(m, tol, report);
      check_psd(m, tol, report);
      break;
  }
  report.ok = report.violations.empty();
  return report;
}

CostMatrix::CostMatrix(Matrix entries, MatrixClass tag, const Tolerances& tol)
    : tag_(tag) {
  if (entries.rows() != entries.cols() || entries.size() == 0)
    throw InvalidMatrix("CostMatrix: matrix must be square and non-empty");
  double asym = (entries - entries.transpose()).cwiseAbs().maxCoeff();
  if (asym > tol.symmetry) {
    std::ostringstream msg;
    msg << "CostMatrix: asymmetry " << asym << " exceeds tolerance "
        << tol.symmetry;
    throw InvalidMatrix(msg.str());
  }
  entries_ = 0.5 * (entries + entries.transpose());
}

ValidationReport CostMatrix::validate(const Tolerances& tol) const {
  return validate_class(entries_, tag_, tol);
}

}  // namespace mel
