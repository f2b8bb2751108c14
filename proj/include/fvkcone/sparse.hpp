#pragma once

#include <algorithm>
#include <cstddef>
#include <stdexcept>
#include <utility>
#include <vector>

namespace fvk {

/// Compressed sparse row matrix for the finite-difference operators.
struct Csr {
  int nrows = 0;
  int ncols = 0;
  std::vector<int> rowptr;  // size nrows+1
  std::vector<int> col;
  std::vector<double> val;

  void apply(const std::vector<double>& x, std::vector<double>& y) const {
    y.assign(nrows, 0.0);
    for (int i = 0; i < nrows; ++i) {
      double s = 0.0;
      for (int k = rowptr[i]; k < rowptr[i + 1]; ++k) s += val[k] * x[col[k]];
      y[i] = s;
    }
  }

  std::vector<double> apply(const std::vector<double>& x) const {
    std::vector<double> y;
    apply(x, y);
    return y;
  }
};

inline Csr transpose(const Csr& a) {
  Csr t;
  t.nrows = a.ncols;
  t.ncols = a.nrows;
  t.rowptr.assign(t.nrows + 1, 0);
  for (int c : a.col) ++t.rowptr[c + 1];
  for (int i = 0; i < t.nrows; ++i) t.rowptr[i + 1] += t.rowptr[i];
  t.col.resize(a.col.size());
  t.val.resize(a.val.size());
  std::vector<int> next(t.rowptr.begin(), t.rowptr.end() - 1);
  for (int i = 0; i < a.nrows; ++i) {
    for (int k = a.rowptr[i]; k < a.rowptr[i + 1]; ++k) {
      const int p = next[a.col[k]]++;
      t.col[p] = i;
      t.val[p] = a.val[k];
    }
  }
  return t;
}

/// Incremental row-by-row CSR builder; entries within a row are merged.
class CsrBuilder {
 public:
  CsrBuilder(int nrows, int ncols) : nrows_(nrows), ncols_(ncols) {
    rowptr_.reserve(nrows + 1);
    rowptr_.push_back(0);
  }

  void add(int col, double v) { row_.emplace_back(col, v); }

  void finish_row() {
    // merge duplicate columns, keep ascending order
    std::sort(row_.begin(), row_.end());
    for (std::size_t k = 0; k < row_.size(); ++k) {
      if (k > 0 && row_[k].first == row_[k - 1].first) {
        val_.back() += row_[k].second;
      } else {
        col_.push_back(row_[k].first);
        val_.push_back(row_[k].second);
      }
    }
    row_.clear();
    rowptr_.push_back((int)col_.size());
  }

  Csr take() {
    if ((int)rowptr_.size() != nrows_ + 1)
      throw std::logic_error("CsrBuilder: row count mismatch");
    Csr m;
    m.nrows = nrows_;
    m.ncols = ncols_;
    m.rowptr = std::move(rowptr_);
    m.col = std::move(col_);
    m.val = std::move(val_);
    return m;
  }

 private:
  int nrows_, ncols_;
  std::vector<std::pair<int, double>> row_;
  std::vector<int> rowptr_;
  std::vector<int> col_;
  std::vector<double> val_;
};

}  // namespace fvk
