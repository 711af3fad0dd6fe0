#include <chrono>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "nilcentral/nilcentral.hpp"
#include "subprocess.hpp"

using namespace nilcentral;
using namespace nilcentral::testing;

namespace {

class Criterion {
public:
    explicit Criterion(int index) : index_(index) {}

    void expect(bool ok, const std::string& what) {
        if (!ok && detail_.empty()) detail_ = what;
        ok_ = ok_ && ok;
    }

    bool report(const std::string& label, double elapsed_s) const {
        std::cout << "criterion " << index_ << ": " << (ok_ ? "PASS" : "FAIL") << " - " << label
                  << " (" << elapsed_s << "s)";
        if (!ok_) std::cout << " [" << detail_ << "]";
        std::cout << "\n";
        return ok_;
    }

private:
    int index_;
    bool ok_ = true;
    std::string detail_;
};

bool run_criterion(int index, const std::string& label, double budget_s,
                   const std::function<void(Criterion&)>& body) {
    Criterion crit(index);
    const auto start = std::chrono::steady_clock::now();
    try {
        body(crit);
    } catch (const std::exception& e) {
        crit.expect(false, std::string("exception: ") + e.what());
    }
    const double elapsed =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    crit.expect(elapsed < budget_s, "time budget exceeded");
    return crit.report(label, elapsed);
}

FieldSpec q() { return FieldSpec::rationals(); }

} // namespace

int main(int argc, char** argv) {
    const std::string cli = argc > 1 ? argv[1] : "";
    int failed = 0;
    const auto gate = [&](bool ok) {
        if (!ok) ++failed;
    };

    gate(run_criterion(1, "centralizing dimension census is 3n+1 at r=4,5,6", 300.0,
                       [](Criterion& c) {
                           const std::size_t want[] = {19, 31, 46};
                           for (int r = 4; r <= 6; ++r) {
                               const CensusResult res =
                                   map_space_dimension(q(), r, MapKind::centralizing);
                               c.expect(res.dimension == want[r - 4],
                                        "r=" + std::to_string(r) + " gave " +
                                            std::to_string(res.dimension));
                           }
                       }));

    gate(run_criterion(2, "commuting dimension census is n+2 at r=4,5,6", 300.0,
                       [](Criterion& c) {
                           const std::size_t want[] = {8, 12, 17};
                           for (int r = 4; r <= 6; ++r) {
                               const CensusResult res =
                                   map_space_dimension(q(), r, MapKind::commuting);
                               c.expect(res.dimension == want[r - 4],
                                        "r=" + std::to_string(r) + " gave " +
                                            std::to_string(res.dimension));
                           }
                       }));

    gate(run_criterion(
        3, "affine example map: centralizing, not commuting, commutator formula", 60.0,
        [](Criterion& c) {
            Rng rng(303);
            for (int r = 4; r <= 6; ++r) {
                const MapOnN p = p_map(q(), r);
                c.expect(is_centralizing(p).verdict, "p not judged centralizing");
                const DecideReport rep = is_commuting(p);
                c.expect(!rep.verdict, "p judged commuting");
                c.expect(!rep.witnesses.empty(), "no witnesses returned");
                for (const Witness& w : rep.witnesses) {
                    const UTMatrix recomputed = commutator(p.apply(w.input), w.input);
                    c.expect(recomputed == w.commutator_value && !recomputed.is_zero(),
                             "witness does not certify");
                }
                for (int trial = 0; trial < 100; ++trial) {
                    const UTMatrix a = random_ut(rng, q(), r);
                    const UTMatrix direct = commutator(p.apply(a), a);
                    UTMatrix predicted(q(), r);
                    const Scalar coeff = a.get(r - 1, r) - a.get(1, 2);
                    if (!coeff.is_zero()) predicted.set(1, r, coeff);
                    c.expect(direct == predicted, "commutator formula mismatch at r=" +
                                                      std::to_string(r));
                }
            }
        }));

    gate(run_criterion(
        4, "commuting decomposition round-trips 200 seeded coefficient triples", 60.0,
        [](Criterion& c) {
            Rng rng(404);
            for (int trial = 0; trial < 200; ++trial) {
                const int r = 4 + trial % 3;
                const Scalar lambda = random_scalar(rng, q());
                const Scalar a =
                    trial % 2 == 0 ? Scalar::zero(q()) : random_nonzero_scalar(rng, q());
                const std::vector<Scalar> zeta = random_functional(rng, q(), r);
                const MapOnN f = assemble_commuting(q(), r, lambda, a, zeta);
                c.expect(is_commuting(f).verdict, "assembled map not commuting");
                const CommutingDecomposition cd = decompose_commuting(f);
                c.expect(cd.lambda == lambda, "lambda drifted");
                c.expect(cd.a == a, "g coefficient drifted");
                c.expect(cd.zeta == zeta, "functional drifted");
                c.expect(cd.is_standard_form == a.is_zero(), "standard form flag wrong");
            }
        }));

    gate(run_criterion(
        5, "closed-form centralizer equals the null-space oracle on 100 samples", 120.0,
        [](Criterion& c) {
            Rng rng(505);
            for (int trial = 0; trial < 100; ++trial) {
                const int r = 4 + trial % 5;
                const UTMatrix a = s1_element(q(), r, random_nonzero_diagonal(rng, q(), r));
                const SubspaceBasis closed = centralizer_closed_form(a);
                const SubspaceBasis oracle = centralizer_oracle(a);
                c.expect(closed == oracle, "bases differ at r=" + std::to_string(r));
                c.expect(closed.dim() == static_cast<std::size_t>(r - 1), "dimension not r-1");
            }
        }));

    gate(run_criterion(6, "conjugate witness family spans the whole ring for r=4..8", 60.0,
                       [](Criterion& c) {
                           for (int r = 4; r <= 8; ++r) {
                               c.expect(span_s_rank(q(), r) == strict_upper_slot_count(r),
                                        "rank deficit at r=" + std::to_string(r));
                           }
                       }));

    gate(run_criterion(
        7, "identity suite: factorial, weighted commutator, combination system, formula", 120.0,
        [](Criterion& c) {
            c.expect(factorial_inequality_check(50).passed, "factorial inequality failed");
            for (int r = 4; r <= 8; ++r) {
                c.expect(w1_s2_commutator_check(q(), r).passed,
                         "weighted commutator check failed at r=" + std::to_string(r));
            }
            for (int r = 5; r <= 10; ++r) {
                for (int t = 2; t < r - 2; ++t) {
                    c.expect(power_combination_system(r, t).forced_trivial,
                             "nontrivial combination at r=" + std::to_string(r) +
                                 ", t=" + std::to_string(t));
                }
            }
            Rng rng(707);
            for (int r = 4; r <= 6; ++r) {
                c.expect(s1_commutator_check(q(), r, 100, rng).passed,
                         "superdiagonal commutator formula failed at r=" + std::to_string(r));
            }
        }));

    gate(run_criterion(
        8, "power display audit: literal form mismatches, shifted form matches", 60.0,
        [](Criterion& c) {
            for (int r = 4; r <= 8; ++r) {
                for (int t = 2; t <= r - 1; ++t) {
                    const IdentityCheckReport report = power_closed_form_check(r, t);
                    c.expect(report.passed, "shifted form mismatch at r=" + std::to_string(r) +
                                                ", t=" + std::to_string(t));
                    c.expect(report.records.size() == 1 && !report.records.front().matches_claim,
                             "literal form unexpectedly matched at r=" + std::to_string(r) +
                                 ", t=" + std::to_string(t));
                }
            }
        }));

    gate(run_criterion(
        9, "centralizing verdict is invariant under triangular conjugation", 60.0,
        [](Criterion& c) {
            Rng rng(909);
            int positives = 0;
            for (int trial = 0; trial < 100; ++trial) {
                const int r = 4 + trial % 3;
                MapOnN f = random_linear_map(rng, q(), r);
                if (trial % 2 == 1) {
                    f = random_scalar(rng, q()) * MapOnN::identity_map(q(), r) +
                        omega_map(q(), r, random_omega_triple(rng, q(), r));
                }
                const InvTriMatrix b = random_invtri(rng, q(), r);
                const bool before = is_centralizing(f).verdict;
                const bool after = is_centralizing(conjugate_map(b, f)).verdict;
                if (before) ++positives;
                c.expect(before == after, "verdict changed under conjugation");
            }
            c.expect(positives >= 40, "sample did not cover centralizing maps");
        }));

    gate(run_criterion(10, "CLI subcommands: exit codes and byte-stable reports", 120.0,
                       [&cli](Criterion& c) {
                           c.expect(!cli.empty(), "no CLI path provided in argv[1]");
                           if (cli.empty()) return;
                           const TempDir dir;
                           const RunResult g = run_cli(dir, cli, "examples --r 4 --name g");
                           c.expect(g.exit_code == 0, "examples failed");
                           spit(dir.file("g.json"), g.out);
                           const RunResult p = run_cli(dir, cli, "examples --r 4 --name p");
                           spit(dir.file("p.json"), p.out);

                           c.expect(run_cli(dir, cli, "decide --map " + dir.file("g.json") +
                                                          " --property commuting")
                                            .exit_code == 0,
                                    "decide exit 0 path");
                           const RunResult bad = run_cli(dir, cli, "decide --map " +
                                                                       dir.file("p.json") +
                                                                       " --property commuting");
                           c.expect(bad.exit_code == 1, "decide exit 1 path");
                           c.expect(run_cli(dir, cli, "dims --r 4 --field F9").exit_code == 2,
                                    "exit 2 path");
                           c.expect(run_cli(dir, cli, "dims --r 4").exit_code == 0, "dims path");

                           const RunResult again = run_cli(dir, cli, "decide --map " +
                                                                         dir.file("p.json") +
                                                                         " --property commuting");
                           c.expect(normalize_elapsed(again.out) == normalize_elapsed(bad.out),
                                    "byte stability");

                           const RunResult sweep = run_cli(dir, cli, "sweep --r 4 --p Q");
                           std::istringstream lines(sweep.out);
                           std::string header;
                           std::getline(lines, header);
                           c.expect(header == "r,p,n,dim_centralizing,dim_commuting,"
                                              "pred_centralizing,pred_commuting,match",
                                    "sweep CSV header");
                           std::string row;
                           std::getline(lines, row);
                           c.expect(row == "4,Q,6,19,8,19,8,true", "sweep CSV row");

                           const RunResult idents =
                               run_cli(dir, cli, "identities --r-max 5 --seed 11");
                           const RunResult idents2 =
                               run_cli(dir, cli, "identities --r-max 5 --seed 11");
                           c.expect(idents.exit_code == 0 &&
                                        normalize_elapsed(idents.out) ==
                                            normalize_elapsed(idents2.out),
                                    "identities byte stability under a fixed seed");
                       }));

    if (failed == 0) {
        std::cout << "all criteria passed\n";
        return 0;
    }
    std::cout << failed << " criteria failed\n";
    return 1;
}
