#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "nilcentral/error.hpp"
#include "nilcentral/field.hpp"
#include "nilcentral/rng.hpp"

namespace nilcentral {

namespace detail {

using EntryMap = std::map<std::pair<int, int>, Scalar>;

/// Product of two sparse entry maps (1-based indices); zero sums are dropped.
inline EntryMap sparse_product(const EntryMap& lhs, const EntryMap& rhs) {
    EntryMap out;
    for (const auto& [lij, lv] : lhs) {
        const int mid = lij.second;
        auto it = rhs.lower_bound({mid, 0});
        for (; it != rhs.end() && it->first.first == mid; ++it) {
            const std::pair<int, int> key{lij.first, it->first.second};
            const Scalar term = lv * it->second;
            auto [slot, inserted] = out.try_emplace(key, term);
            if (!inserted) {
                slot->second += term;
                if (slot->second.is_zero()) out.erase(slot);
            }
        }
    }
    return out;
}

} // namespace detail

inline std::size_t strict_upper_slot_count(int r) {
    if (r < 2) throw domain_error("matrix size must be at least 2, got " + std::to_string(r));
    return static_cast<std::size_t>(r) * static_cast<std::size_t>(r - 1) / 2;
}

/// Position of slot (i, j), 1 <= i < j <= r, in the lexicographic basis
/// (1,2), (1,3), ..., (1,r), (2,3), ..., (r-1,r).
inline std::size_t slot_index(int r, int i, int j) {
    if (!(1 <= i && i < j && j <= r)) {
        throw domain_error("slot (" + std::to_string(i) + "," + std::to_string(j) +
                           ") out of range for r=" + std::to_string(r));
    }
    const std::size_t before = static_cast<std::size_t>(i - 1) * static_cast<std::size_t>(r) -
                               static_cast<std::size_t>(i) * static_cast<std::size_t>(i - 1) / 2;
    return before + static_cast<std::size_t>(j - i - 1);
}

inline std::pair<int, int> slot_of(int r, std::size_t index) {
    std::size_t rem = index;
    for (int i = 1; i < r; ++i) {
        const std::size_t row_len = static_cast<std::size_t>(r - i);
        if (rem < row_len) return {i, i + 1 + static_cast<int>(rem)};
        rem -= row_len;
    }
    throw domain_error("slot index " + std::to_string(index) + " out of range for r=" +
                       std::to_string(r));
}

/// A strictly upper triangular r x r matrix, stored sparsely. Only nonzero
/// entries are kept, so iteration order over entries() is the basis order.
class UTMatrix {
public:
    UTMatrix(const FieldSpec& spec, int r) : spec_(spec), r_(r) {
        strict_upper_slot_count(r);
    }

    static UTMatrix basis_unit(const FieldSpec& spec, int r, int i, int j) {
        UTMatrix m(spec, r);
        m.set(i, j, Scalar::one(spec));
        return m;
    }

    const FieldSpec& spec() const { return spec_; }
    int r() const { return r_; }
    const detail::EntryMap& entries() const { return entries_; }

    void set(int i, int j, const Scalar& v) {
        check_slot(i, j);
        check_scalar(v);
        if (v.is_zero()) {
            entries_.erase({i, j});
        } else {
            entries_.insert_or_assign({i, j}, v);
        }
    }

    Scalar get(int i, int j) const {
        check_slot(i, j);
        auto it = entries_.find({i, j});
        return it == entries_.end() ? Scalar::zero(spec_) : it->second;
    }

    bool is_zero() const { return entries_.empty(); }

    UTMatrix& operator+=(const UTMatrix& rhs) {
        check_context(rhs);
        for (const auto& [ij, v] : rhs.entries_) {
            auto [slot, inserted] = entries_.try_emplace(ij, v);
            if (!inserted) {
                slot->second += v;
                if (slot->second.is_zero()) entries_.erase(slot);
            }
        }
        return *this;
    }

    UTMatrix& operator-=(const UTMatrix& rhs) {
        check_context(rhs);
        for (const auto& [ij, v] : rhs.entries_) {
            auto [slot, inserted] = entries_.try_emplace(ij, -v);
            if (!inserted) {
                slot->second -= v;
                if (slot->second.is_zero()) entries_.erase(slot);
            }
        }
        return *this;
    }

    UTMatrix operator-() const {
        UTMatrix out(spec_, r_);
        for (const auto& [ij, v] : entries_) {
            out.entries_.emplace(ij, -v);
        }
        return out;
    }

    UTMatrix& scale(const Scalar& c) {
        check_scalar(c);
        if (c.is_zero()) {
            entries_.clear();
            return *this;
        }
        for (auto& [ij, v] : entries_) {
            v *= c;
        }
        return *this;
    }

    friend UTMatrix operator+(UTMatrix a, const UTMatrix& b) { return a += b; }
    friend UTMatrix operator-(UTMatrix a, const UTMatrix& b) { return a -= b; }

    friend UTMatrix operator*(const UTMatrix& a, const UTMatrix& b) {
        a.check_context(b);
        UTMatrix out(a.spec_, a.r_);
        out.entries_ = detail::sparse_product(a.entries_, b.entries_);
        return out;
    }

    friend UTMatrix operator*(const Scalar& c, UTMatrix a) { return a.scale(c); }

    friend bool operator==(const UTMatrix& a, const UTMatrix& b) {
        if (a.spec_ != b.spec_ || a.r_ != b.r_) return false;
        return a.entries_ == b.entries_;
    }
    friend bool operator!=(const UTMatrix& a, const UTMatrix& b) { return !(a == b); }

    /// Coordinates in the lexicographic basis of length r(r-1)/2.
    std::vector<Scalar> to_coords() const {
        std::vector<Scalar> out(strict_upper_slot_count(r_), Scalar::zero(spec_));
        for (const auto& [ij, v] : entries_) {
            out[slot_index(r_, ij.first, ij.second)] = v;
        }
        return out;
    }

    static UTMatrix from_coords(const FieldSpec& spec, int r, const std::vector<Scalar>& coords) {
        if (coords.size() != strict_upper_slot_count(r)) {
            throw domain_error("from_coords: expected " +
                               std::to_string(strict_upper_slot_count(r)) + " coordinates, got " +
                               std::to_string(coords.size()));
        }
        UTMatrix out(spec, r);
        for (std::size_t k = 0; k < coords.size(); ++k) {
            if (coords[k].is_zero()) continue;
            const auto [i, j] = slot_of(r, k);
            out.set(i, j, coords[k]);
        }
        return out;
    }

    void check_context(const UTMatrix& rhs) const {
        if (spec_ != rhs.spec_) {
            throw mismatch_error("field mismatch: " + spec_.str() + " vs " + rhs.spec_.str());
        }
        if (r_ != rhs.r_) {
            throw mismatch_error("size mismatch: r=" + std::to_string(r_) + " vs r=" +
                                 std::to_string(rhs.r_));
        }
    }

private:
    void check_slot(int i, int j) const { slot_index(r_, i, j); }
    void check_scalar(const Scalar& v) const {
        if (v.spec() != spec_) {
            throw mismatch_error("scalar field " + v.spec().str() + " does not match matrix field " +
                                 spec_.str());
        }
    }

    FieldSpec spec_;
    int r_;
    detail::EntryMap entries_;
};

inline UTMatrix commutator(const UTMatrix& a, const UTMatrix& b) { return a * b - b * a; }

/// Canonical one-line rendering: "2*e(1,3) + -1*e(2,4)", or "0".
inline std::string to_term_string(const UTMatrix& a) {
    if (a.is_zero()) return "0";
    std::string out;
    for (const auto& [ij, v] : a.entries()) {
        if (!out.empty()) out += " + ";
        out += v.str() + "*e(" + std::to_string(ij.first) + "," + std::to_string(ij.second) + ")";
    }
    return out;
}

/// A^t for t >= 1. The ring has no identity, so t = 0 is rejected.
inline UTMatrix power(const UTMatrix& a, int t) {
    if (t < 1) throw domain_error("power exponent must be at least 1, got " + std::to_string(t));
    UTMatrix out = a;
    for (int k = 1; k < t; ++k) {
        out = out * a;
    }
    return out;
}

/// True when the only nonzero slot is (1, r).
inline bool in_center(const UTMatrix& a) {
    for (const auto& [ij, v] : a.entries()) {
        if (ij.first != 1 || ij.second != a.r()) return false;
    }
    return true;
}

/// True when every nonzero slot lies in {(1, r-1), (1, r), (2, r)}. Below r = 4
/// these slots cover all of N_r and the answer degenerates to true.
inline bool in_omega(const UTMatrix& a) {
    const int r = a.r();
    for (const auto& [ij, v] : a.entries()) {
        const bool ok = (ij.first == 1 && ij.second == r - 1) ||
                        (ij.first == 1 && ij.second == r) ||
                        (ij.first == 2 && ij.second == r);
        if (!ok) return false;
    }
    return true;
}

/// Ones on the superdiagonal.
inline UTMatrix j_matrix(const FieldSpec& spec, int r) {
    UTMatrix m(spec, r);
    for (int i = 1; i < r; ++i) {
        m.set(i, i + 1, Scalar::one(spec));
    }
    return m;
}

/// i on slot (i, i+1).
inline UTMatrix w1_matrix(const FieldSpec& spec, int r) {
    UTMatrix m(spec, r);
    for (int i = 1; i < r; ++i) {
        m.set(i, i + 1, Scalar::from_int(spec, i));
    }
    return m;
}

/// r - i on slot (i, i+1).
inline UTMatrix w2_matrix(const FieldSpec& spec, int r) {
    UTMatrix m(spec, r);
    for (int i = 1; i < r; ++i) {
        m.set(i, i + 1, Scalar::from_int(spec, r - i));
    }
    return m;
}

/// Nonzero superdiagonal and nothing anywhere else.
inline bool is_s1_shaped(const UTMatrix& a) {
    const int r = a.r();
    if (a.entries().size() != static_cast<std::size_t>(r - 1)) return false;
    for (const auto& [ij, v] : a.entries()) {
        if (ij.second != ij.first + 1) return false;
    }
    return true;
}

/// Invertible upper triangular r x r matrix: diagonal entries are nonzero, and
/// strictly lower slots do not exist.
class InvTriMatrix {
public:
    static InvTriMatrix identity(const FieldSpec& spec, int r) {
        InvTriMatrix m(spec, r);
        for (int i = 1; i <= r; ++i) {
            m.entries_.emplace(std::make_pair(i, i), Scalar::one(spec));
        }
        return m;
    }

    static InvTriMatrix diagonal(const FieldSpec& spec, const std::vector<Scalar>& d) {
        if (d.size() < 2) throw domain_error("diagonal needs at least 2 entries");
        InvTriMatrix m(spec, static_cast<int>(d.size()));
        for (int i = 1; i <= m.r_; ++i) {
            const Scalar& v = d[static_cast<std::size_t>(i - 1)];
            if (v.spec() != spec) throw mismatch_error("diagonal entry field mismatch");
            if (v.is_zero()) throw domain_error("diagonal entry " + std::to_string(i) + " is zero");
            m.entries_.emplace(std::make_pair(i, i), v);
        }
        return m;
    }

    const FieldSpec& spec() const { return spec_; }
    int r() const { return r_; }
    const detail::EntryMap& entries() const { return entries_; }

    void set(int i, int j, const Scalar& v) {
        if (!(1 <= i && i <= j && j <= r_)) {
            throw domain_error("upper triangular slot (" + std::to_string(i) + "," +
                               std::to_string(j) + ") out of range for r=" + std::to_string(r_));
        }
        if (v.spec() != spec_) throw mismatch_error("scalar field does not match matrix field");
        if (i == j) {
            if (v.is_zero()) throw domain_error("diagonal entry must stay nonzero");
            entries_.insert_or_assign({i, j}, v);
            return;
        }
        if (v.is_zero()) {
            entries_.erase({i, j});
        } else {
            entries_.insert_or_assign({i, j}, v);
        }
    }

    Scalar get(int i, int j) const {
        if (!(1 <= i && i <= j && j <= r_)) {
            throw domain_error("upper triangular slot (" + std::to_string(i) + "," +
                               std::to_string(j) + ") out of range for r=" + std::to_string(r_));
        }
        auto it = entries_.find({i, j});
        return it == entries_.end() ? Scalar::zero(spec_) : it->second;
    }

    friend InvTriMatrix operator*(const InvTriMatrix& a, const InvTriMatrix& b) {
        if (a.spec_ != b.spec_ || a.r_ != b.r_) {
            throw mismatch_error("context mismatch in triangular product");
        }
        InvTriMatrix out(a.spec_, a.r_);
        out.entries_ = detail::sparse_product(a.entries_, b.entries_);
        return out;
    }

    /// Back substitution: the inverse is upper triangular with inverted diagonal.
    InvTriMatrix inverse() const {
        InvTriMatrix out(spec_, r_);
        for (int col = r_; col >= 1; --col) {
            out.entries_.emplace(std::make_pair(col, col), get(col, col).inverse());
            for (int row = col - 1; row >= 1; --row) {
                Scalar acc = Scalar::zero(spec_);
                for (int k = row + 1; k <= col; ++k) {
                    const Scalar bik = get(row, k);
                    if (bik.is_zero()) continue;
                    auto it = out.entries_.find({k, col});
                    if (it == out.entries_.end()) continue;
                    acc += bik * it->second;
                }
                if (!acc.is_zero()) {
                    out.entries_.emplace(std::make_pair(row, col), -(acc / get(row, row)));
                }
            }
        }
        return out;
    }

    friend bool operator==(const InvTriMatrix& a, const InvTriMatrix& b) {
        if (a.spec_ != b.spec_ || a.r_ != b.r_) return false;
        return a.entries_ == b.entries_;
    }
    friend bool operator!=(const InvTriMatrix& a, const InvTriMatrix& b) { return !(a == b); }

private:
    InvTriMatrix(const FieldSpec& spec, int r) : spec_(spec), r_(r) {
        strict_upper_slot_count(r);
    }

    FieldSpec spec_;
    int r_;
    detail::EntryMap entries_;
};

/// left * x * right. The factors are unit-compatible, and the result of
/// sandwiching a strictly upper matrix between triangular ones stays strictly
/// upper.
inline UTMatrix sandwich(const InvTriMatrix& left, const UTMatrix& x, const InvTriMatrix& right) {
    if (left.spec() != x.spec() || right.spec() != x.spec() || left.r() != x.r() ||
        right.r() != x.r()) {
        throw mismatch_error("context mismatch in sandwich product");
    }
    detail::EntryMap mid = detail::sparse_product(left.entries(), x.entries());
    detail::EntryMap prod = detail::sparse_product(mid, right.entries());
    UTMatrix out(x.spec(), x.r());
    for (const auto& [ij, v] : prod) {
        if (ij.first >= ij.second) {
            throw internal_error("sandwich of a strictly upper matrix left slot (" +
                                 std::to_string(ij.first) + "," + std::to_string(ij.second) +
                                 ") occupied");
        }
        out.set(ij.first, ij.second, v);
    }
    return out;
}

/// b^{-1} * a * b.
inline UTMatrix conjugate(const InvTriMatrix& b, const UTMatrix& a) {
    return sandwich(b.inverse(), a, b);
}

/// Conjugate of the superdiagonal-ones matrix by diag(d): entry (i, i+1) becomes
/// d_{i+1} / d_i. Computed by explicit inversion and multiplication.
inline UTMatrix s1_element(const FieldSpec& spec, int r, const std::vector<Scalar>& d) {
    if (static_cast<int>(d.size()) != r) {
        throw domain_error("s1_element: expected " + std::to_string(r) + " diagonal entries, got " +
                           std::to_string(d.size()));
    }
    const InvTriMatrix big_d = InvTriMatrix::diagonal(spec, d);
    return conjugate(big_d, j_matrix(spec, r));
}

/// Conjugate of the superdiagonal-ones matrix by I - e_{i,j}, computed by
/// explicit inversion and multiplication.
inline UTMatrix s2_element(const FieldSpec& spec, int r, int i, int j) {
    slot_index(r, i, j);
    InvTriMatrix t = InvTriMatrix::identity(spec, r);
    t.set(i, j, -Scalar::one(spec));
    return conjugate(t, j_matrix(spec, r));
}

inline Scalar random_scalar(Rng& rng, const FieldSpec& spec, long long lo = -9, long long hi = 9) {
    return Scalar::from_int(spec, rng.int_in(lo, hi));
}

inline Scalar random_nonzero_scalar(Rng& rng, const FieldSpec& spec, long long lo = -9,
                                    long long hi = 9) {
    for (;;) {
        Scalar s = random_scalar(rng, spec, lo, hi);
        if (!s.is_zero()) return s;
    }
}

inline UTMatrix random_ut(Rng& rng, const FieldSpec& spec, int r) {
    UTMatrix m(spec, r);
    for (int i = 1; i < r; ++i) {
        for (int j = i + 1; j <= r; ++j) {
            m.set(i, j, random_scalar(rng, spec));
        }
    }
    return m;
}

inline InvTriMatrix random_invtri(Rng& rng, const FieldSpec& spec, int r) {
    InvTriMatrix m = InvTriMatrix::identity(spec, r);
    for (int i = 1; i <= r; ++i) {
        m.set(i, i, random_nonzero_scalar(rng, spec));
        for (int j = i + 1; j <= r; ++j) {
            m.set(i, j, random_scalar(rng, spec));
        }
    }
    return m;
}

inline std::vector<Scalar> random_nonzero_diagonal(Rng& rng, const FieldSpec& spec, int r) {
    std::vector<Scalar> d;
    d.reserve(static_cast<std::size_t>(r));
    for (int i = 0; i < r; ++i) {
        d.push_back(random_nonzero_scalar(rng, spec));
    }
    return d;
}

} // namespace nilcentral
