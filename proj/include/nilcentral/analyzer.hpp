#pragma once

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "nilcentral/error.hpp"
#include "nilcentral/field.hpp"
#include "nilcentral/linsolve.hpp"
#include "nilcentral/maps.hpp"
#include "nilcentral/matrix.hpp"

namespace nilcentral {

/// A concrete input X whose commutator [f(X), X] violates the decided property.
/// Witnesses are re-verified by direct evaluation before they are stored.
struct Witness {
    std::string kind;                       // "single" or "pair"
    std::vector<std::size_t> unit_indices;  // 0-based basis indices behind X
    UTMatrix input;
    UTMatrix commutator_value;
};

struct DecideReport {
    bool verdict;
    std::vector<Witness> witnesses;
};

namespace detail {

/// Shared decider core. The property is [f(X), X] in Z when to_center is set,
/// [f(X), X] = 0 otherwise. The quadratic condition over all X is equivalent to
/// its polarized basis conditions because scaling X by c in {1, 2} separates the
/// degree-2 and degree-1 parts (this needs at least three field elements, which
/// FieldSpec guarantees).
inline DecideReport decide_property(const MapOnN& f, bool to_center) {
    const FieldSpec spec = f.spec();
    const int r = f.r();
    const std::size_t n = f.n();
    auto ok = [to_center](const UTMatrix& c) { return to_center ? in_center(c) : c.is_zero(); };

    std::vector<UTMatrix> units;
    std::vector<UTMatrix> images;
    units.reserve(n);
    images.reserve(n);
    for (std::size_t k = 0; k < n; ++k) {
        const auto [i, j] = slot_of(r, k);
        units.push_back(UTMatrix::basis_unit(spec, r, i, j));
        images.push_back(f.image_of_unit(k));
    }

    bool verdict = true;
    std::vector<bool> singleton_ok(n, true);
    std::vector<Witness> witnesses;

    for (std::size_t k = 0; k < n; ++k) {
        const bool quad_ok = ok(commutator(images[k], units[k]));
        const bool const_ok = !f.is_affine() || ok(commutator(f.constant(), units[k]));
        if (quad_ok && const_ok) continue;
        verdict = false;
        singleton_ok[k] = false;
        bool found = false;
        for (long long c = 1; c <= 2; ++c) {
            UTMatrix x = units[k];
            x.scale(Scalar::from_int(spec, c));
            const UTMatrix w = commutator(f.apply(x), x);
            if (!ok(w)) {
                witnesses.push_back(Witness{"single", {k}, std::move(x), w});
                found = true;
                break;
            }
        }
        if (!found) {
            throw internal_error("polarized single condition failed at unit " + std::to_string(k) +
                                 " but no scaled witness violates; scaling separation broke");
        }
    }

    for (std::size_t k = 0; k < n; ++k) {
        for (std::size_t l = k + 1; l < n; ++l) {
            const UTMatrix cross = commutator(images[k], units[l]) + commutator(images[l], units[k]);
            if (ok(cross)) continue;
            verdict = false;
            // A pair witness is only guaranteed when both single conditions
            // hold; otherwise the single witness already certifies failure.
            if (!singleton_ok[k] || !singleton_ok[l]) continue;
            const UTMatrix x = units[k] + units[l];
            const UTMatrix w = commutator(f.apply(x), x);
            if (ok(w)) {
                throw internal_error("polarized pair condition failed at units " +
                                     std::to_string(k) + "," + std::to_string(l) +
                                     " but e_k + e_l does not violate; decider inconsistency");
            }
            witnesses.push_back(Witness{"pair", {k, l}, x, w});
        }
    }

    return DecideReport{verdict, std::move(witnesses)};
}

} // namespace detail

/// Decides [f(X), X] in Z for all X.
inline DecideReport is_centralizing(const MapOnN& f) { return detail::decide_property(f, true); }

/// Decides [f(X), X] = 0 for all X.
inline DecideReport is_commuting(const MapOnN& f) { return detail::decide_property(f, false); }

struct CentralizingDecomposition {
    Scalar lambda;
    MapOnN mu;  // image inside the corner space spanned by e_{1,r-1}, e_{1,r}, e_{2,r}
};

/// Splits a centralizing linear map as lambda * identity + mu with mu valued in
/// the corner space. lambda is read from the (2,3)-coordinate of the image of
/// e_{2,3}, the first basis slot outside the corner space for every r >= 4, and
/// the whole residual is then verified slot by slot.
inline CentralizingDecomposition decompose_centralizing(const MapOnN& f) {
    const int r = f.r();
    if (r < 4) {
        throw domain_error("decomposition is not unique below r=4 (corner space degenerates)");
    }
    if (f.is_affine()) throw domain_error("decomposition requires a linear map");
    const FieldSpec spec = f.spec();
    const Scalar lambda = f.image_of_unit(slot_index(r, 2, 3)).get(2, 3);
    MapOnN mu = f - lambda * MapOnN::identity_map(spec, r);
    for (std::size_t k = 0; k < mu.n(); ++k) {
        const UTMatrix img = mu.image_of_unit(k);
        if (!in_omega(img)) {
            const auto [i, j] = slot_of(r, k);
            throw internal_error("residual image of e(" + std::to_string(i) + "," +
                                 std::to_string(j) + ") = " + to_term_string(img) +
                                 " escapes the corner space; the input map is not centralizing");
        }
    }
    return CentralizingDecomposition{lambda, std::move(mu)};
}

struct CommutingDecomposition {
    Scalar lambda;
    Scalar a;                  // coefficient of the corner map g
    std::vector<Scalar> zeta;  // center-valued functional, one coordinate per basis unit
    bool is_standard_form;     // a = 0
};

/// Splits a commuting linear map as lambda * identity + a * g + zeta(.) e_{1,r}.
/// The coefficient a is read twice (from the images of e_{1,2} and e_{r-1,r});
/// disagreement or a non-central remainder certifies the input is not commuting.
inline CommutingDecomposition decompose_commuting(const MapOnN& f) {
    CentralizingDecomposition cd = decompose_centralizing(f);
    const int r = f.r();
    const FieldSpec spec = f.spec();
    const Scalar a = cd.mu.image_of_unit(slot_index(r, 1, 2)).get(1, r - 1);
    const Scalar a_other = cd.mu.image_of_unit(slot_index(r, r - 1, r)).get(2, r);
    if (a != a_other) {
        throw internal_error("corner coefficient reads disagree: " + a.str() + " vs " +
                             a_other.str() + "; the input map is not commuting");
    }
    MapOnN remainder = cd.mu - a * g_map(spec, r);
    std::vector<Scalar> zeta;
    zeta.reserve(remainder.n());
    for (std::size_t k = 0; k < remainder.n(); ++k) {
        const UTMatrix img = remainder.image_of_unit(k);
        if (!in_center(img)) {
            const auto [i, j] = slot_of(r, k);
            throw internal_error("remainder image of e(" + std::to_string(i) + "," +
                                 std::to_string(j) + ") = " + to_term_string(img) +
                                 " is not central; the input map is not commuting");
        }
        zeta.push_back(img.get(1, r));
    }
    return CommutingDecomposition{cd.lambda, a, std::move(zeta), a.is_zero()};
}

/// lambda * identity + a * g + zeta_map(zeta): the canonical commuting shape.
inline MapOnN assemble_commuting(const FieldSpec& spec, int r, const Scalar& lambda,
                                 const Scalar& a, const std::vector<Scalar>& zeta) {
    MapOnN f = lambda * MapOnN::identity_map(spec, r);
    f += a * g_map(spec, r);
    f += zeta_map(spec, r, zeta);
    return f;
}

/// Span of the powers A, A^2, ..., A^{r-1} for A with full nonzero superdiagonal.
inline SubspaceBasis centralizer_closed_form(const UTMatrix& a) {
    if (!is_s1_shaped(a)) {
        throw domain_error("closed-form centralizer needs a full nonzero superdiagonal");
    }
    const int r = a.r();
    std::vector<std::vector<Scalar>> vectors;
    vectors.reserve(static_cast<std::size_t>(r - 1));
    for (int t = 1; t <= r - 1; ++t) {
        vectors.push_back(power(a, t).to_coords());
    }
    return SubspaceBasis::from_vectors(a.spec(), strict_upper_slot_count(r), vectors);
}

/// Null space of X -> [A, X]: everything commuting with A, for arbitrary A.
inline SubspaceBasis centralizer_oracle(const UTMatrix& a) {
    const int r = a.r();
    const FieldSpec spec = a.spec();
    const std::size_t n = strict_upper_slot_count(r);
    ExactMatrix op(spec, n, n);
    for (std::size_t k = 0; k < n; ++k) {
        const auto [i, j] = slot_of(r, k);
        const std::vector<Scalar> col =
            commutator(a, UTMatrix::basis_unit(spec, r, i, j)).to_coords();
        for (std::size_t s = 0; s < n; ++s) {
            op.at(s, k) = col[s];
        }
    }
    return SubspaceBasis::from_vectors(spec, n, null_space(op));
}

/// Rank of the witness family: conjugates of the superdiagonal-ones matrix by
/// generic diagonals together with every transvection conjugate. Diagonals are
/// d_i = k^{i(i-1)/2} for k = 1..r, whose consecutive ratios k^i are pairwise
/// distinct powers; k values divisible by a prime-field characteristic are
/// skipped (they would zero the diagonal).
inline std::size_t span_s_rank(const FieldSpec& spec, int r) {
    const std::size_t n = strict_upper_slot_count(r);
    std::vector<std::vector<Scalar>> vectors;
    for (int k = 1; k <= r; ++k) {
        const Scalar base = Scalar::from_int(spec, k);
        if (base.is_zero()) continue;
        std::vector<Scalar> d;
        d.reserve(static_cast<std::size_t>(r));
        for (int i = 1; i <= r; ++i) {
            d.push_back(scalar_pow(base, static_cast<unsigned long>(i) *
                                             static_cast<unsigned long>(i - 1) / 2));
        }
        vectors.push_back(s1_element(spec, r, d).to_coords());
    }
    for (int i = 1; i < r; ++i) {
        for (int j = i + 1; j <= r; ++j) {
            vectors.push_back(s2_element(spec, r, i, j).to_coords());
        }
    }
    return SubspaceBasis::from_vectors(spec, n, vectors).dim();
}

enum class MapKind { centralizing, commuting };

inline const char* map_kind_name(MapKind kind) {
    return kind == MapKind::centralizing ? "centralizing" : "commuting";
}

struct CensusResult {
    std::size_t dimension;
    SubspaceBasis basis;  // inside the n^2-dimensional coefficient space
};

/// Dimension of the space of linear maps with the given property, computed as
/// the null space of the polarized constraint system: one equation per basis
/// pair (k <= l) per forbidden coordinate of the polarized commutator. The
/// center coordinate (1, r) is unconstrained for centralizing maps and
/// constrained for commuting ones.
inline CensusResult map_space_dimension(const FieldSpec& spec, int r, MapKind kind) {
    const std::size_t n = strict_upper_slot_count(r);
    std::vector<UTMatrix> units;
    units.reserve(n);
    for (std::size_t k = 0; k < n; ++k) {
        const auto [i, j] = slot_of(r, k);
        units.push_back(UTMatrix::basis_unit(spec, r, i, j));
    }

    // comm[s][l] = coordinates of [b_s, b_l]
    std::vector<std::vector<std::vector<Scalar>>> comm(n);
    for (std::size_t s = 0; s < n; ++s) {
        comm[s].reserve(n);
        for (std::size_t l = 0; l < n; ++l) {
            comm[s].push_back(commutator(units[s], units[l]).to_coords());
        }
    }

    const std::size_t center_slot = slot_index(r, 1, r);
    const Scalar zero = Scalar::zero(spec);
    std::vector<std::vector<Scalar>> rows;
    for (std::size_t k = 0; k < n; ++k) {
        for (std::size_t l = k; l < n; ++l) {
            for (std::size_t w = 0; w < n; ++w) {
                if (kind == MapKind::centralizing && w == center_slot) continue;
                std::vector<Scalar> row(n * n, zero);
                bool nonzero = false;
                for (std::size_t s = 0; s < n; ++s) {
                    if (k == l) {
                        const Scalar& c = comm[s][k][w];
                        if (c.is_zero()) continue;
                        row[s * n + k] += c;
                        nonzero = true;
                    } else {
                        const Scalar& ck = comm[s][l][w];
                        if (!ck.is_zero()) {
                            row[s * n + k] += ck;
                            nonzero = true;
                        }
                        const Scalar& cl = comm[s][k][w];
                        if (!cl.is_zero()) {
                            row[s * n + l] += cl;
                            nonzero = true;
                        }
                    }
                }
                if (nonzero) rows.push_back(std::move(row));
            }
        }
    }
    if (rows.empty()) {
        // no constraint survives (possible below r = 4): every map qualifies
        rows.emplace_back(n * n, zero);
    }

    const std::vector<std::vector<Scalar>> basis_vectors =
        null_space(ExactMatrix::from_rows(spec, rows));
    SubspaceBasis basis = SubspaceBasis::from_vectors(spec, n * n, basis_vectors);
    return CensusResult{basis.dim(), std::move(basis)};
}

/// Predicted dimension over characteristic zero, valid for r >= 4.
inline std::size_t predicted_dimension(int r, MapKind kind) {
    if (r < 4) throw domain_error("predictions require r >= 4");
    const std::size_t n = strict_upper_slot_count(r);
    return kind == MapKind::centralizing ? 3 * n + 1 : n + 2;
}

/// True iff f(A) lies in span{A, A^2, ..., A^{r-3}} + corner space, the shape a
/// centralizing linear map must give to images of full-superdiagonal elements.
inline bool truncated_power_span_check(const MapOnN& f, const UTMatrix& a) {
    if (f.spec() != a.spec() || f.r() != a.r()) {
        throw mismatch_error("map and matrix context mismatch");
    }
    const int r = f.r();
    if (r < 4) throw domain_error("truncated power span check needs r >= 4");
    if (f.is_affine()) throw domain_error("truncated power span check needs a linear map");
    if (!is_s1_shaped(a)) {
        throw domain_error("truncated power span check needs a full nonzero superdiagonal");
    }
    const FieldSpec spec = f.spec();
    const std::size_t n = strict_upper_slot_count(r);
    std::vector<std::vector<Scalar>> vectors;
    for (int t = 1; t <= r - 3; ++t) {
        vectors.push_back(power(a, t).to_coords());
    }
    vectors.push_back(UTMatrix::basis_unit(spec, r, 1, r - 1).to_coords());
    vectors.push_back(UTMatrix::basis_unit(spec, r, 1, r).to_coords());
    vectors.push_back(UTMatrix::basis_unit(spec, r, 2, r).to_coords());
    return SubspaceBasis::from_vectors(spec, n, vectors).contains(f.apply(a).to_coords());
}

/// One census grid cell, shaped for the sweep table.
struct CensusRow {
    int r;
    std::string field;
    std::size_t n;
    std::size_t dim_centralizing;
    std::size_t dim_commuting;
    bool has_prediction;  // r >= 4; predictions are the characteristic-zero values
    std::size_t pred_centralizing;
    std::size_t pred_commuting;
    bool match;  // valid when has_prediction
};

inline CensusRow census_row(const FieldSpec& spec, int r) {
    CensusRow row{r,     spec.str(), strict_upper_slot_count(r), 0, 0, r >= 4, 0, 0,
                  false};
    row.dim_centralizing = map_space_dimension(spec, r, MapKind::centralizing).dimension;
    row.dim_commuting = map_space_dimension(spec, r, MapKind::commuting).dimension;
    if (row.has_prediction) {
        row.pred_centralizing = predicted_dimension(r, MapKind::centralizing);
        row.pred_commuting = predicted_dimension(r, MapKind::commuting);
        row.match = row.dim_centralizing == row.pred_centralizing &&
                    row.dim_commuting == row.pred_commuting;
    }
    return row;
}

} // namespace nilcentral
