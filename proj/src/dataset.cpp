#include "mel/dataset.hpp"

#include <sstream>
#include <vector>

#include "mel/errors.hpp"

namespace mel {

const char* to_string(Side s) {
  return s == Side::Samples ? "samples" : "features";
}

namespace {

/* Returns the indices to keep after removing rows identical (linf <= tol) to
 * an earlier row. Works on whatever orientation `m` is passed in. */
std::vector<Index> dedup_rows_of(const Matrix& m, double tol,
                                 std::vector<Index>* dropped,
                                 const std::vector<Index>& original_ids) {
  std::vector<Index> keep;
  for (Index r = 0; r < m.rows(); ++r) {
    bool duplicate = false;
    for (Index prev : keep) {
      if ((m.row(r) - m.row(prev)).cwiseAbs().maxCoeff() <= tol) {
        duplicate = true;
        break;
      }
    }
    if (duplicate)
      dropped->push_back(original_ids[static_cast<std::size_t>(r)]);
    else
      keep.push_back(r);
  }
  return keep;
}

Matrix select_rows(const Matrix& m, const std::vector<Index>& rows) {
  Matrix out(static_cast<Index>(rows.size()), m.cols());
  for (std::size_t r = 0; r < rows.size(); ++r) out.row(static_cast<Index>(r)) = m.row(rows[r]);
  return out;
}

}  // namespace

Dataset Dataset::from_raw(Matrix raw, const Tolerances& tol) {
  if (raw.size() == 0) throw InvalidMatrix("Dataset: empty input matrix");
  if ((raw.array() < 0.0).any()) {
    for (Index i = 0; i < raw.rows(); ++i)
      for (Index j = 0; j < raw.cols(); ++j)
        if (raw(i, j) < 0.0) {
          std::ostringstream msg;
          msg << "Dataset: negative entry " << raw(i, j) << " at (" << i << ","
              << j << ")";
          throw NegativeEntries(msg.str());
        }
  }

  // Track surviving original indices through alternating row/column dedup
  // passes. Dropping a column can make two previously distinct rows collide,
  // so iterate until stable.
  std::vector<Index> row_ids(static_cast<std::size_t>(raw.rows()));
  std::vector<Index> col_ids(static_cast<std::size_t>(raw.cols()));
  for (std::size_t i = 0; i < row_ids.size(); ++i) row_ids[i] = static_cast<Index>(i);
  for (std::size_t j = 0; j < col_ids.size(); ++j) col_ids[j] = static_cast<Index>(j);

  Dataset ds;
  Matrix cur = std::move(raw);
  bool changed = true;
  while (changed) {
    changed = false;
    std::vector<Index> keep_rows =
        dedup_rows_of(cur, tol.dedup, &ds.dropped_rows_, row_ids);
    if (static_cast<Index>(keep_rows.size()) != cur.rows()) {
      std::vector<Index> new_ids;
      for (Index r : keep_rows) new_ids.push_back(row_ids[static_cast<std::size_t>(r)]);
      row_ids = std::move(new_ids);
      cur = select_rows(cur, keep_rows);
      changed = true;
    }
    if (cur.rows() == 0) break;
    Matrix t = cur.transpose();
    std::vector<Index> keep_cols =
        dedup_rows_of(t, tol.dedup, &ds.dropped_cols_, col_ids);
    if (static_cast<Index>(keep_cols.size()) != cur.cols()) {
      std::vector<Index> new_ids;
      for (Index c : keep_cols) new_ids.push_back(col_ids[static_cast<std::size_t>(c)]);
      col_ids = std::move(new_ids);
      cur = select_rows(t, keep_cols).transpose();
      changed = true;
    }
  }

  if (cur.rows() == 0 || cur.cols() == 0)
    throw EmptyAfterDedup("Dataset: nothing left after removing duplicates");

  Vector row_sums = cur.rowwise().sum();
  Vector col_sums = cur.colwise().sum().transpose();
  for (Index i = 0; i < row_sums.size(); ++i)
    if (row_sums(i) <= 0.0) {
      std::ostringstream msg;
      msg << "Dataset: row " << row_ids[static_cast<std::size_t>(i)] << " sums to zero";
      throw ZeroMarginal(msg.str());
    }
  for (Index j = 0; j < col_sums.size(); ++j)
    if (col_sums(j) <= 0.0) {
      std::ostringstream msg;
      msg << "Dataset: column " << col_ids[static_cast<std::size_t>(j)] << " sums to zero";
      throw ZeroMarginal(msg.str());
    }

  ds.raw_ = std::move(cur);
  ds.row_normalized_ = ds.raw_;
  for (Index i = 0; i < ds.raw_.rows(); ++i) ds.row_normalized_.row(i) /= row_sums(i);
  ds.col_normalized_ = ds.raw_;
  for (Index j = 0; j < ds.raw_.cols(); ++j) ds.col_normalized_.col(j) /= col_sums(j);
  return ds;
}

Dataset normalize_dataset(Matrix raw, const Tolerances& tol) {
  return Dataset::from_raw(std::move(raw), tol);
}

}  // namespace mel
