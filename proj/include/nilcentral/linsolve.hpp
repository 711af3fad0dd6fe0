#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "nilcentral/error.hpp"
#include "nilcentral/field.hpp"

namespace nilcentral {

/// Dense matrix over one field, row-major, 0-based indices.
class ExactMatrix {
public:
    ExactMatrix(const FieldSpec& spec, std::size_t rows, std::size_t cols)
        : spec_(spec), rows_(rows), cols_(cols), data_(rows * cols, Scalar::zero(spec)) {}

    static ExactMatrix from_rows(const FieldSpec& spec, const std::vector<std::vector<Scalar>>& rows) {
        const std::size_t r = rows.size();
        const std::size_t c = r == 0 ? 0 : rows.front().size();
        ExactMatrix m(spec, r, c);
        for (std::size_t i = 0; i < r; ++i) {
            if (rows[i].size() != c) throw domain_error("from_rows: ragged row lengths");
            for (std::size_t j = 0; j < c; ++j) {
                m.at(i, j) = rows[i][j];
            }
        }
        return m;
    }

    const FieldSpec& spec() const { return spec_; }
    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    Scalar& at(std::size_t i, std::size_t j) {
        check_index(i, j);
        return data_[i * cols_ + j];
    }
    const Scalar& at(std::size_t i, std::size_t j) const {
        check_index(i, j);
        return data_[i * cols_ + j];
    }

    friend bool operator==(const ExactMatrix& a, const ExactMatrix& b) {
        if (a.spec_ != b.spec_ || a.rows_ != b.rows_ || a.cols_ != b.cols_) return false;
        for (std::size_t k = 0; k < a.data_.size(); ++k) {
            if (a.data_[k] != b.data_[k]) return false;
        }
        return true;
    }
    friend bool operator!=(const ExactMatrix& a, const ExactMatrix& b) { return !(a == b); }

private:
    void check_index(std::size_t i, std::size_t j) const {
        if (i >= rows_ || j >= cols_) {
            throw domain_error("matrix index (" + std::to_string(i) + "," + std::to_string(j) +
                               ") out of range for " + std::to_string(rows_) + "x" +
                               std::to_string(cols_));
        }
    }

    FieldSpec spec_;
    std::size_t rows_;
    std::size_t cols_;
    std::vector<Scalar> data_;
};

struct RrefResult {
    ExactMatrix matrix;
    std::vector<std::size_t> pivot_cols;
};

/// Reduced row echelon form with deterministic pivoting: for each column left
/// to right, the first unused row with a nonzero entry becomes the pivot row.
/// Shape is preserved; zero rows sink to the bottom.
inline RrefResult rref(ExactMatrix m) {
    std::vector<std::size_t> pivots;
    std::size_t pivot_row = 0;
    for (std::size_t col = 0; col < m.cols() && pivot_row < m.rows(); ++col) {
        std::size_t chosen = pivot_row;
        while (chosen < m.rows() && m.at(chosen, col).is_zero()) ++chosen;
        if (chosen == m.rows()) continue;
        if (chosen != pivot_row) {
            for (std::size_t j = 0; j < m.cols(); ++j) {
                std::swap(m.at(pivot_row, j), m.at(chosen, j));
            }
        }
        const Scalar inv = m.at(pivot_row, col).inverse();
        for (std::size_t j = col; j < m.cols(); ++j) {
            m.at(pivot_row, j) *= inv;
        }
        for (std::size_t i = 0; i < m.rows(); ++i) {
            if (i == pivot_row || m.at(i, col).is_zero()) continue;
            const Scalar factor = m.at(i, col);
            for (std::size_t j = col; j < m.cols(); ++j) {
                m.at(i, j) -= factor * m.at(pivot_row, j);
            }
        }
        pivots.push_back(col);
        ++pivot_row;
    }
    return RrefResult{std::move(m), std::move(pivots)};
}

inline std::size_t rank(const ExactMatrix& m) { return rref(m).pivot_cols.size(); }

/// Canonical null-space basis: one vector per free column, in column order,
/// with a 1 in the free slot.
inline std::vector<std::vector<Scalar>> null_space(const ExactMatrix& m) {
    const RrefResult red = rref(m);
    const FieldSpec spec = m.spec();
    std::vector<bool> is_pivot(m.cols(), false);
    for (std::size_t c : red.pivot_cols) is_pivot[c] = true;

    std::vector<std::vector<Scalar>> basis;
    for (std::size_t free_col = 0; free_col < m.cols(); ++free_col) {
        if (is_pivot[free_col]) continue;
        std::vector<Scalar> v(m.cols(), Scalar::zero(spec));
        v[free_col] = Scalar::one(spec);
        for (std::size_t k = 0; k < red.pivot_cols.size(); ++k) {
            v[red.pivot_cols[k]] = -red.matrix.at(k, free_col);
        }
        basis.push_back(std::move(v));
    }
    return basis;
}

/// One solution of A x = b, or nullopt when inconsistent.
inline std::optional<std::vector<Scalar>> solve(const ExactMatrix& a, const std::vector<Scalar>& b) {
    if (b.size() != a.rows()) throw domain_error("solve: right-hand side length mismatch");
    ExactMatrix aug(a.spec(), a.rows(), a.cols() + 1);
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t j = 0; j < a.cols(); ++j) {
            aug.at(i, j) = a.at(i, j);
        }
        aug.at(i, a.cols()) = b[i];
    }
    const RrefResult red = rref(std::move(aug));
    for (std::size_t c : red.pivot_cols) {
        if (c == a.cols()) return std::nullopt;
    }
    std::vector<Scalar> x(a.cols(), Scalar::zero(a.spec()));
    for (std::size_t k = 0; k < red.pivot_cols.size(); ++k) {
        x[red.pivot_cols[k]] = red.matrix.at(k, a.cols());
    }
    return x;
}

/// A linear subspace of F^m held in canonical form: the nonzero rows of the
/// reduced row echelon form of its spanning set. Two spans are equal exactly
/// when their canonical rows are identical.
class SubspaceBasis {
public:
    static SubspaceBasis from_vectors(const FieldSpec& spec, std::size_t ambient_dim,
                                      const std::vector<std::vector<Scalar>>& vectors) {
        for (const auto& v : vectors) {
            if (v.size() != ambient_dim) throw domain_error("from_vectors: wrong vector length");
        }
        SubspaceBasis out(spec, ambient_dim);
        if (vectors.empty()) return out;
        const RrefResult red = rref(ExactMatrix::from_rows(spec, vectors));
        for (std::size_t k = 0; k < red.pivot_cols.size(); ++k) {
            std::vector<Scalar> row;
            row.reserve(ambient_dim);
            for (std::size_t j = 0; j < ambient_dim; ++j) {
                row.push_back(red.matrix.at(k, j));
            }
            out.rows_.push_back(std::move(row));
            out.pivot_cols_.push_back(red.pivot_cols[k]);
        }
        return out;
    }

    const FieldSpec& spec() const { return spec_; }
    std::size_t ambient_dim() const { return ambient_dim_; }
    std::size_t dim() const { return rows_.size(); }
    const std::vector<std::vector<Scalar>>& rows() const { return rows_; }

    bool contains(const std::vector<Scalar>& v) const {
        if (v.size() != ambient_dim_) throw domain_error("contains: wrong vector length");
        std::vector<Scalar> rem = v;
        for (std::size_t k = 0; k < rows_.size(); ++k) {
            const Scalar coeff = rem[pivot_cols_[k]];
            if (coeff.is_zero()) continue;
            for (std::size_t j = 0; j < ambient_dim_; ++j) {
                rem[j] -= coeff * rows_[k][j];
            }
        }
        for (const Scalar& s : rem) {
            if (!s.is_zero()) return false;
        }
        return true;
    }

    friend bool operator==(const SubspaceBasis& a, const SubspaceBasis& b) {
        if (a.spec_ != b.spec_ || a.ambient_dim_ != b.ambient_dim_) return false;
        return a.rows_ == b.rows_;
    }
    friend bool operator!=(const SubspaceBasis& a, const SubspaceBasis& b) { return !(a == b); }

private:
    SubspaceBasis(const FieldSpec& spec, std::size_t ambient_dim)
        : spec_(spec), ambient_dim_(ambient_dim) {}

    FieldSpec spec_;
    std::size_t ambient_dim_;
    std::vector<std::vector<Scalar>> rows_;
    std::vector<std::size_t> pivot_cols_;
};

} // namespace nilcentral
