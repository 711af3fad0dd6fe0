#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "nilcentral/error.hpp"
#include "nilcentral/field.hpp"
#include "nilcentral/matrix.hpp"
#include "nilcentral/rng.hpp"

namespace nilcentral {

/// A linear or affine self-map of the strictly upper triangular matrices.
/// Column k holds the coordinates of the image of the k-th basis unit in the
/// lexicographic basis; an absent constant means the map is linear. A zero
/// constant is canonicalized away, so is_affine() implies constant() != 0.
class MapOnN {
public:
    static MapOnN zero(const FieldSpec& spec, int r) {
        const std::size_t n = strict_upper_slot_count(r);
        MapOnN f(spec, r);
        f.columns_.assign(n, std::vector<Scalar>(n, Scalar::zero(spec)));
        return f;
    }

    static MapOnN identity_map(const FieldSpec& spec, int r) {
        MapOnN f = zero(spec, r);
        for (std::size_t k = 0; k < f.n(); ++k) {
            f.columns_[k][k] = Scalar::one(spec);
        }
        return f;
    }

    static MapOnN from_images(const FieldSpec& spec, int r, const std::vector<UTMatrix>& images) {
        const std::size_t n = strict_upper_slot_count(r);
        if (images.size() != n) {
            throw mismatch_error("expected " + std::to_string(n) + " basis images, got " +
                                 std::to_string(images.size()));
        }
        MapOnN f(spec, r);
        f.columns_.reserve(n);
        for (const UTMatrix& img : images) {
            if (img.spec() != spec || img.r() != r) {
                throw mismatch_error("basis image context mismatch");
            }
            f.columns_.push_back(img.to_coords());
        }
        return f;
    }

    static MapOnN from_columns(const FieldSpec& spec, int r, std::vector<std::vector<Scalar>> columns,
                               std::optional<UTMatrix> constant) {
        const std::size_t n = strict_upper_slot_count(r);
        if (columns.size() != n) {
            throw mismatch_error("expected " + std::to_string(n) + " columns, got " +
                                 std::to_string(columns.size()));
        }
        for (const auto& col : columns) {
            if (col.size() != n) throw mismatch_error("column length mismatch");
            for (const Scalar& s : col) {
                if (s.spec() != spec) throw mismatch_error("column entry field mismatch");
            }
        }
        MapOnN f(spec, r);
        f.columns_ = std::move(columns);
        if (constant) {
            if (constant->spec() != spec || constant->r() != r) {
                throw mismatch_error("constant term context mismatch");
            }
            f.set_constant(std::move(*constant));
        }
        return f;
    }

    const FieldSpec& spec() const { return spec_; }
    int r() const { return r_; }
    std::size_t n() const { return columns_.size(); }
    const std::vector<std::vector<Scalar>>& columns() const { return columns_; }

    bool is_affine() const { return constant_.has_value(); }
    const UTMatrix& constant() const {
        if (!constant_) throw domain_error("map is linear, no constant term");
        return *constant_;
    }

    UTMatrix image_of_unit(std::size_t k) const {
        if (k >= n()) throw domain_error("basis index out of range");
        return UTMatrix::from_coords(spec_, r_, columns_[k]);
    }

    UTMatrix apply(const UTMatrix& x) const {
        if (x.spec() != spec_ || x.r() != r_) throw mismatch_error("apply: context mismatch");
        std::vector<Scalar> out(n(), Scalar::zero(spec_));
        for (const auto& [ij, v] : x.entries()) {
            const std::size_t k = slot_index(r_, ij.first, ij.second);
            for (std::size_t s = 0; s < n(); ++s) {
                if (columns_[k][s].is_zero()) continue;
                out[s] += columns_[k][s] * v;
            }
        }
        UTMatrix y = UTMatrix::from_coords(spec_, r_, out);
        if (constant_) y += *constant_;
        return y;
    }

    /// The linear part: same columns, constant dropped.
    MapOnN linear_part() const {
        MapOnN f(spec_, r_);
        f.columns_ = columns_;
        return f;
    }

    MapOnN& operator+=(const MapOnN& rhs) {
        check_context(rhs);
        for (std::size_t k = 0; k < n(); ++k) {
            for (std::size_t s = 0; s < n(); ++s) {
                columns_[k][s] += rhs.columns_[k][s];
            }
        }
        if (rhs.constant_) {
            UTMatrix c = constant_ ? *constant_ + *rhs.constant_ : *rhs.constant_;
            constant_.reset();
            set_constant(std::move(c));
        }
        return *this;
    }

    MapOnN& operator-=(const MapOnN& rhs) {
        check_context(rhs);
        for (std::size_t k = 0; k < n(); ++k) {
            for (std::size_t s = 0; s < n(); ++s) {
                columns_[k][s] -= rhs.columns_[k][s];
            }
        }
        if (rhs.constant_) {
            UTMatrix c = constant_ ? *constant_ - *rhs.constant_ : -*rhs.constant_;
            constant_.reset();
            set_constant(std::move(c));
        }
        return *this;
    }

    MapOnN& scale(const Scalar& c) {
        if (c.spec() != spec_) throw mismatch_error("scale: field mismatch");
        for (auto& col : columns_) {
            for (Scalar& s : col) {
                s *= c;
            }
        }
        if (constant_) {
            UTMatrix k = *constant_;
            k.scale(c);
            constant_.reset();
            set_constant(std::move(k));
        }
        return *this;
    }

    friend MapOnN operator+(MapOnN a, const MapOnN& b) { return a += b; }
    friend MapOnN operator-(MapOnN a, const MapOnN& b) { return a -= b; }
    friend MapOnN operator*(const Scalar& c, MapOnN f) { return f.scale(c); }

    friend bool operator==(const MapOnN& a, const MapOnN& b) {
        if (a.spec_ != b.spec_ || a.r_ != b.r_) return false;
        if (a.columns_ != b.columns_) return false;
        if (a.constant_.has_value() != b.constant_.has_value()) return false;
        return !a.constant_ || *a.constant_ == *b.constant_;
    }
    friend bool operator!=(const MapOnN& a, const MapOnN& b) { return !(a == b); }

    void check_context(const MapOnN& rhs) const {
        if (spec_ != rhs.spec_ || r_ != rhs.r_) {
            throw mismatch_error("map context mismatch: " + spec_.str() + ",r=" +
                                 std::to_string(r_) + " vs " + rhs.spec_.str() + ",r=" +
                                 std::to_string(rhs.r_));
        }
    }

private:
    MapOnN(const FieldSpec& spec, int r) : spec_(spec), r_(r) {
        strict_upper_slot_count(r);
    }

    void set_constant(UTMatrix c) {
        if (!c.is_zero()) constant_.emplace(std::move(c));
    }

    FieldSpec spec_;
    int r_;
    std::vector<std::vector<Scalar>> columns_;
    std::optional<UTMatrix> constant_;

    friend MapOnN with_constant(MapOnN f, UTMatrix c);
};

/// Attach (replace) the constant term; a zero constant yields a linear map.
inline MapOnN with_constant(MapOnN f, UTMatrix c) {
    if (c.spec() != f.spec() || c.r() != f.r()) {
        throw mismatch_error("constant term context mismatch");
    }
    f.constant_.reset();
    f.set_constant(std::move(c));
    return f;
}

/// apply(compose(f, g), X) = apply(f, apply(g, X)). Both maps must be linear.
inline MapOnN compose(const MapOnN& f, const MapOnN& g) {
    f.check_context(g);
    if (f.is_affine() || g.is_affine()) {
        throw domain_error("compose requires linear maps");
    }
    std::vector<UTMatrix> images;
    images.reserve(f.n());
    for (std::size_t k = 0; k < f.n(); ++k) {
        images.push_back(f.apply(g.image_of_unit(k)));
    }
    return MapOnN::from_images(f.spec(), f.r(), images);
}

/// The map X -> B f(B^{-1} X B) B^{-1} for invertible triangular B and linear f.
inline MapOnN conjugate_map(const InvTriMatrix& b, const MapOnN& f) {
    if (b.spec() != f.spec() || b.r() != f.r()) {
        throw mismatch_error("conjugator context mismatch");
    }
    if (f.is_affine()) throw domain_error("conjugate_map requires a linear map");
    const InvTriMatrix binv = b.inverse();
    std::vector<UTMatrix> images;
    images.reserve(f.n());
    for (std::size_t k = 0; k < f.n(); ++k) {
        const auto [i, j] = slot_of(f.r(), k);
        const UTMatrix moved = sandwich(binv, UTMatrix::basis_unit(f.spec(), f.r(), i, j), b);
        images.push_back(sandwich(b, f.apply(moved), binv));
    }
    return MapOnN::from_images(f.spec(), f.r(), images);
}

/// X -> x_{1,2} e_{1,r-1} + x_{r-1,r} e_{2,r}. Needs r >= 4 so the target slots
/// are distinct from the source slots.
inline MapOnN g_map(const FieldSpec& spec, int r) {
    if (r < 4) throw domain_error("g needs r >= 4, got " + std::to_string(r));
    MapOnN f = MapOnN::zero(spec, r);
    std::vector<UTMatrix> images;
    images.reserve(f.n());
    for (std::size_t k = 0; k < f.n(); ++k) {
        UTMatrix img(spec, r);
        if (k == slot_index(r, 1, 2)) img.set(1, r - 1, Scalar::one(spec));
        if (k == slot_index(r, r - 1, r)) img.set(2, r, Scalar::one(spec));
        images.push_back(std::move(img));
    }
    return MapOnN::from_images(spec, r, images);
}

/// The affine map with linear part X -> x_{1,r} e_{1,r} and constant
/// e_{1,r-1} + e_{2,r}.
inline MapOnN p_map(const FieldSpec& spec, int r) {
    if (r < 4) throw domain_error("p needs r >= 4, got " + std::to_string(r));
    MapOnN lin = MapOnN::zero(spec, r);
    std::vector<UTMatrix> images;
    images.reserve(lin.n());
    for (std::size_t k = 0; k < lin.n(); ++k) {
        UTMatrix img(spec, r);
        if (k == slot_index(r, 1, r)) img.set(1, r, Scalar::one(spec));
        images.push_back(std::move(img));
    }
    UTMatrix c(spec, r);
    c.set(1, r - 1, Scalar::one(spec));
    c.set(2, r, Scalar::one(spec));
    return with_constant(MapOnN::from_images(spec, r, images), std::move(c));
}

/// X -> functional(X) e_{1,r}: a center-valued linear map.
inline MapOnN zeta_map(const FieldSpec& spec, int r, const std::vector<Scalar>& functional) {
    const std::size_t n = strict_upper_slot_count(r);
    if (functional.size() != n) {
        throw mismatch_error("functional must have " + std::to_string(n) + " coordinates");
    }
    std::vector<UTMatrix> images;
    images.reserve(n);
    for (std::size_t k = 0; k < n; ++k) {
        UTMatrix img(spec, r);
        img.set(1, r, functional[k]);
        images.push_back(std::move(img));
    }
    return MapOnN::from_images(spec, r, images);
}

/// Three linear functionals giving the coordinates of an Omega-valued map along
/// e_{1,r-1}, e_{1,r}, e_{2,r}.
struct OmegaTriple {
    std::vector<Scalar> a_coef;
    std::vector<Scalar> b_coef;
    std::vector<Scalar> c_coef;
};

/// X -> a(X) e_{1,r-1} + b(X) e_{1,r} + c(X) e_{2,r}. Needs r >= 3 so the three
/// target slots exist.
inline MapOnN omega_map(const FieldSpec& spec, int r, const OmegaTriple& t) {
    if (r < 3) throw domain_error("omega-valued maps need r >= 3, got " + std::to_string(r));
    const std::size_t n = strict_upper_slot_count(r);
    if (t.a_coef.size() != n || t.b_coef.size() != n || t.c_coef.size() != n) {
        throw mismatch_error("omega triple functionals must have " + std::to_string(n) +
                             " coordinates each");
    }
    std::vector<UTMatrix> images;
    images.reserve(n);
    for (std::size_t k = 0; k < n; ++k) {
        // The three target slots are pairwise distinct for every r >= 3.
        UTMatrix img(spec, r);
        img.set(1, r - 1, t.a_coef[k]);
        img.set(1, r, t.b_coef[k]);
        img.set(2, r, t.c_coef[k]);
        images.push_back(std::move(img));
    }
    return MapOnN::from_images(spec, r, images);
}

inline std::vector<Scalar> random_functional(Rng& rng, const FieldSpec& spec, int r) {
    const std::size_t n = strict_upper_slot_count(r);
    std::vector<Scalar> v;
    v.reserve(n);
    for (std::size_t k = 0; k < n; ++k) {
        v.push_back(random_scalar(rng, spec));
    }
    return v;
}

inline OmegaTriple random_omega_triple(Rng& rng, const FieldSpec& spec, int r) {
    return OmegaTriple{random_functional(rng, spec, r), random_functional(rng, spec, r),
                       random_functional(rng, spec, r)};
}

inline MapOnN random_linear_map(Rng& rng, const FieldSpec& spec, int r) {
    const std::size_t n = strict_upper_slot_count(r);
    std::vector<std::vector<Scalar>> columns;
    columns.reserve(n);
    for (std::size_t k = 0; k < n; ++k) {
        std::vector<Scalar> col;
        col.reserve(n);
        for (std::size_t s = 0; s < n; ++s) {
            col.push_back(random_scalar(rng, spec));
        }
        columns.push_back(std::move(col));
    }
    return MapOnN::from_columns(spec, r, std::move(columns), std::nullopt);
}

} // namespace nilcentral
