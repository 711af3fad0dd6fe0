#include <algorithm>
#include <atomic>
#include <cctype>
#include <chrono>
#include <cstdint>
#include <cstdlib>
#include <exception>
#include <fstream>
#include <iostream>
#include <mutex>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include <CLI11.hpp>

#include "nilcentral/nilcentral.hpp"

namespace {

using namespace nilcentral;

constexpr int kExitOk = 0;
constexpr int kExitPropertyFailed = 1;
constexpr int kExitUsage = 2;

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw parse_error("cannot open file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

class Stopwatch {
public:
    Stopwatch() : start_(std::chrono::steady_clock::now()) {}
    std::int64_t elapsed_ms() const {
        return std::chrono::duration_cast<std::chrono::milliseconds>(
                   std::chrono::steady_clock::now() - start_)
            .count();
    }

private:
    std::chrono::steady_clock::time_point start_;
};

void emit(const Json& envelope) { std::cout << envelope.dump(2) << "\n"; }

Json make_envelope(const std::string& subcommand, Json context, Json result,
                   std::int64_t elapsed_ms) {
    return Json{{"tool", kToolName},       {"version", kVersion},
                {"subcommand", subcommand}, {"context", std::move(context)},
                {"elapsed_ms", elapsed_ms}, {"result", std::move(result)}};
}

Json kv_object(const std::vector<std::pair<std::string, std::string>>& kv) {
    Json out = Json::object();
    for (const auto& [key, value] : kv) {
        out[key] = value;
    }
    return out;
}

Json witness_to_json(const Witness& w, int r) {
    Json units = Json::array();
    for (const std::size_t k : w.unit_indices) {
        const auto [i, j] = slot_of(r, k);
        units.push_back(Json{{"i", i}, {"j", j}});
    }
    return Json{{"kind", w.kind},
                {"units", std::move(units)},
                {"input", matrix_to_json(w.input)},
                {"commutator", matrix_to_json(w.commutator_value)}};
}

Json decide_report_to_json(const std::string& property, const DecideReport& report, int r) {
    Json witnesses = Json::array();
    for (const Witness& w : report.witnesses) {
        witnesses.push_back(witness_to_json(w, r));
    }
    return Json{{"property", property}, {"verdict", report.verdict},
                {"witnesses", std::move(witnesses)}};
}

Json identity_report_to_json(const IdentityCheckReport& report) {
    Json records = Json::array();
    for (const IdentityRecord& rec : report.records) {
        Json jr{{"params", kv_object(rec.params)},
                {"matches_claim", rec.matches_claim},
                {"values", kv_object(rec.values)}};
        if (!rec.note.empty()) jr["note"] = rec.note;
        records.push_back(std::move(jr));
    }
    return Json{{"identity", report.identity},
                {"parameter_range", report.parameter_range},
                {"passed", report.passed},
                {"records", std::move(records)}};
}

Json basis_to_json(const SubspaceBasis& basis, int r) {
    Json out = Json::array();
    for (const std::vector<Scalar>& row : basis.rows()) {
        out.push_back(matrix_to_json(UTMatrix::from_coords(basis.spec(), r, row)));
    }
    return out;
}

Json context_json(const FieldSpec& spec, int r) {
    return Json{{"r", r}, {"field", spec.str()}};
}

int run_decide(const std::string& map_path, const std::string& property) {
    Stopwatch watch;
    const MapOnN f = map_from_json(parse_json_text(read_file(map_path)));
    const DecideReport report =
        property == "centralizing" ? is_centralizing(f) : is_commuting(f);
    emit(make_envelope("decide", context_json(f.spec(), f.r()),
                       decide_report_to_json(property, report, f.r()), watch.elapsed_ms()));
    return report.verdict ? kExitOk : kExitPropertyFailed;
}

int run_decompose(const std::string& map_path) {
    Stopwatch watch;
    const MapOnN f = map_from_json(parse_json_text(read_file(map_path)));
    if (f.r() < 4) {
        throw domain_error("decompose requires r >= 4 (decomposition not unique below)");
    }
    if (f.is_affine()) throw domain_error("decompose requires a linear map");
    const DecideReport cent = is_centralizing(f);
    if (!cent.verdict) {
        Json result{{"centralizing", false},
                    {"witnesses", decide_report_to_json("centralizing", cent, f.r())["witnesses"]}};
        emit(make_envelope("decompose", context_json(f.spec(), f.r()), std::move(result),
                           watch.elapsed_ms()));
        return kExitPropertyFailed;
    }
    const CentralizingDecomposition cd = decompose_centralizing(f);
    Json result{{"centralizing", true},
                {"lambda", cd.lambda.str()},
                {"mu", map_to_json(cd.mu)}};
    const DecideReport comm = is_commuting(f);
    result["commuting"] = comm.verdict;
    if (comm.verdict) {
        const CommutingDecomposition dd = decompose_commuting(f);
        Json zeta = Json::array();
        for (const Scalar& z : dd.zeta) {
            zeta.push_back(z.str());
        }
        result["a"] = dd.a.str();
        result["zeta"] = std::move(zeta);
        result["standard_form"] = dd.is_standard_form;
    }
    emit(make_envelope("decompose", context_json(f.spec(), f.r()), std::move(result),
                       watch.elapsed_ms()));
    return kExitOk;
}

int run_dims(int r, const std::string& field_text, const std::string& kind) {
    Stopwatch watch;
    const FieldSpec spec = FieldSpec::parse(field_text);
    if (r < 2 || r > static_cast<int>(kMaxInputR)) {
        throw domain_error("dims requires 2 <= r <= " + std::to_string(kMaxInputR));
    }
    std::vector<MapKind> kinds;
    if (kind == "centralizing" || kind == "both") kinds.push_back(MapKind::centralizing);
    if (kind == "commuting" || kind == "both") kinds.push_back(MapKind::commuting);

    bool asserted_mismatch = false;
    Json rows = Json::array();
    for (const MapKind mk : kinds) {
        const CensusResult census = map_space_dimension(spec, r, mk);
        Json row{{"kind", map_kind_name(mk)}, {"computed", census.dimension}};
        if (!spec.is_rationals()) {
            row["predicted"] = "exploration";
            row["match"] = nullptr;
        } else if (r < 4) {
            row["predicted"] = "n/a (r<4)";
            row["match"] = nullptr;
        } else {
            const std::size_t predicted = predicted_dimension(r, mk);
            row["predicted"] = predicted;
            const bool match = census.dimension == predicted;
            row["match"] = match;
            if (!match) asserted_mismatch = true;
        }
        rows.push_back(std::move(row));
    }
    emit(make_envelope("dims", context_json(spec, r), Json{{"rows", std::move(rows)}},
                       watch.elapsed_ms()));
    return asserted_mismatch ? kExitPropertyFailed : kExitOk;
}

int run_centralizer(const std::string& matrix_path) {
    Stopwatch watch;
    const UTMatrix a = matrix_from_json(parse_json_text(read_file(matrix_path)));
    const SubspaceBasis oracle = centralizer_oracle(a);
    Json result{{"matrix", matrix_to_json(a)},
                {"oracle_dimension", oracle.dim()},
                {"oracle_basis", basis_to_json(oracle, a.r())}};
    bool mismatch = false;
    if (is_s1_shaped(a)) {
        const SubspaceBasis closed = centralizer_closed_form(a);
        result["closed_form_applicable"] = true;
        result["closed_form_dimension"] = closed.dim();
        result["closed_form_basis"] = basis_to_json(closed, a.r());
        const bool equal = closed == oracle;
        result["bases_equal"] = equal;
        mismatch = !equal;
    } else {
        result["closed_form_applicable"] = false;
        result["closed_form_dimension"] = nullptr;
        result["closed_form_basis"] = nullptr;
        result["bases_equal"] = nullptr;
    }
    emit(make_envelope("centralizer", context_json(a.spec(), a.r()), std::move(result),
                       watch.elapsed_ms()));
    return mismatch ? kExitPropertyFailed : kExitOk;
}

int run_span(int r) {
    Stopwatch watch;
    if (r < 2 || r > static_cast<int>(kMaxInputR)) {
        throw domain_error("span requires 2 <= r <= " + std::to_string(kMaxInputR));
    }
    const FieldSpec spec = FieldSpec::rationals();
    const std::size_t n = strict_upper_slot_count(r);
    const std::size_t rank = span_s_rank(spec, r);
    const bool match = rank == n;
    emit(make_envelope("span", context_json(spec, r),
                       Json{{"n", n}, {"rank", rank}, {"match", match}}, watch.elapsed_ms()));
    return match ? kExitOk : kExitPropertyFailed;
}

int run_identities(int r_max, std::uint64_t seed) {
    Stopwatch watch;
    if (r_max < 5) throw domain_error("identities requires --r-max >= 5");
    const FieldSpec spec = FieldSpec::rationals();
    std::vector<Json> checks;
    bool all_passed = true;
    auto add = [&](const IdentityCheckReport& report) {
        all_passed = all_passed && report.passed;
        checks.push_back(identity_report_to_json(report));
    };

    add(factorial_inequality_check(r_max));

    {
        std::vector<IdentityCheckReport> parts;
        for (int r = 4; r <= r_max; ++r) {
            parts.push_back(w1_s2_commutator_check(spec, r));
        }
        add(merge_reports("w1_s2_commutator", "4 <= r <= " + std::to_string(r_max), parts));
    }
    {
        std::vector<IdentityCheckReport> parts;
        for (int r = 4; r <= r_max; ++r) {
            for (int t = 1; t <= r - 1; ++t) {
                parts.push_back(power_closed_form_check(r, t));
            }
        }
        add(merge_reports("power_closed_form",
                          "4 <= r <= " + std::to_string(r_max) + ", 1 <= t <= r-1", parts));
    }
    {
        IdentityCheckReport report{"power_combination",
                                   "5 <= r <= " + std::to_string(r_max) + ", 1 < t < r-2", true,
                                   {}};
        for (int r = 5; r <= r_max; ++r) {
            for (int t = 2; t < r - 2; ++t) {
                const CoefficientSystemResult sys = power_combination_system(r, t);
                IdentityRecord rec;
                rec.params = {{"r", std::to_string(r)}, {"t", std::to_string(t)}};
                rec.matches_claim = sys.forced_trivial;
                for (std::size_t e = 0; e < sys.equations.size(); ++e) {
                    rec.values.emplace_back("equation_" + std::to_string(e + 1),
                                            equation_string(sys.equations[e]));
                }
                rec.values.emplace_back("forced_trivial", sys.forced_trivial ? "true" : "false");
                if (!sys.forced_trivial) rec.note = "a nontrivial combination survives";
                report.passed = report.passed && sys.forced_trivial;
                report.records.push_back(std::move(rec));
            }
        }
        add(report);
    }
    {
        Rng rng(seed);
        std::vector<IdentityCheckReport> parts;
        const int r_top = std::min(r_max, 6);
        for (int r = 4; r <= r_top; ++r) {
            parts.push_back(s1_commutator_check(spec, r, 100, rng));
        }
        add(merge_reports("s1_commutator",
                          "4 <= r <= " + std::to_string(r_top) + ", 100 trials each", parts));
    }

    Json result{{"checks", Json(checks)}, {"all_passed", all_passed}};
    emit(make_envelope("identities", Json{{"r_max", r_max}, {"seed", seed}}, std::move(result),
                       watch.elapsed_ms()));
    return all_passed ? kExitOk : kExitPropertyFailed;
}

unsigned sweep_thread_count(std::size_t cells) {
    unsigned threads = std::max(1u, std::thread::hardware_concurrency());
    if (const char* env = std::getenv("NILCENTRAL_THREADS")) {
        char* end = nullptr;
        const unsigned long parsed = std::strtoul(env, &end, 10);
        threads = (end && *end == '\0' && parsed > 0)
                      ? static_cast<unsigned>(std::min<unsigned long>(parsed, 1024))
                      : 1u;
    }
    return static_cast<unsigned>(std::min<std::size_t>(threads, std::max<std::size_t>(cells, 1)));
}

std::string csv_field_label(const std::string& field) {
    // the p column shows Q or the bare prime
    if (field.size() > 1 && field.front() == 'F') return field.substr(1);
    return field;
}

std::string csv_row(const CensusRow& row) {
    std::string out = std::to_string(row.r) + "," + csv_field_label(row.field) + "," +
                      std::to_string(row.n) +
                      "," + std::to_string(row.dim_centralizing) + "," +
                      std::to_string(row.dim_commuting) + ",";
    if (row.has_prediction) {
        out += std::to_string(row.pred_centralizing) + "," + std::to_string(row.pred_commuting) +
               "," + (row.match ? "true" : "false");
    } else {
        out += ",,na";
    }
    return out;
}

int run_sweep(std::vector<int> r_list, const std::vector<std::string>& p_list,
              const std::string& out_path) {
    if (r_list.empty() || p_list.empty()) throw domain_error("sweep requires --r and --p lists");
    for (const int r : r_list) {
        if (r < 2 || r > static_cast<int>(kMaxInputR)) {
            throw domain_error("sweep requires 2 <= r <= " + std::to_string(kMaxInputR));
        }
    }
    std::stable_sort(r_list.begin(), r_list.end());
    std::vector<FieldSpec> specs;
    specs.reserve(p_list.size());
    for (const std::string& p : p_list) {
        // entries are Q, a bare prime like 101, or the F<p> form
        const bool bare_prime =
            !p.empty() && std::all_of(p.begin(), p.end(), [](unsigned char c) {
                return std::isdigit(c) != 0;
            });
        specs.push_back(bare_prime ? FieldSpec::prime(std::stoull(p)) : FieldSpec::parse(p));
    }

    struct Cell {
        int r;
        FieldSpec spec;
    };
    std::vector<Cell> cells;
    for (const int r : r_list) {
        for (const FieldSpec& spec : specs) {
            cells.push_back(Cell{r, spec});
        }
    }

    std::vector<CensusRow> rows(cells.size());
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto worker = [&]() {
        for (;;) {
            const std::size_t index = next.fetch_add(1);
            if (index >= cells.size()) return;
            try {
                rows[index] = census_row(cells[index].spec, cells[index].r);
            } catch (...) {
                std::lock_guard<std::mutex> lock(failure_mutex);
                if (!failure) failure = std::current_exception();
                return;
            }
        }
    };
    const unsigned threads = sweep_thread_count(cells.size());
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (unsigned t = 0; t < threads; ++t) {
        pool.emplace_back(worker);
    }
    for (std::thread& t : pool) {
        t.join();
    }
    if (failure) std::rethrow_exception(failure);

    std::string csv = "r,p,n,dim_centralizing,dim_commuting,pred_centralizing,pred_commuting,match\n";
    for (const CensusRow& row : rows) {
        csv += csv_row(row) + "\n";
    }
    if (out_path.empty()) {
        std::cout << csv;
    } else {
        std::ofstream out(out_path, std::ios::binary);
        if (!out) throw parse_error("cannot open output file: " + out_path);
        out << csv;
    }
    return kExitOk;
}

int run_examples(int r, const std::string& name) {
    if (r < 2 || r > static_cast<int>(kMaxInputR)) {
        throw domain_error("examples requires 2 <= r <= " + std::to_string(kMaxInputR));
    }
    const FieldSpec spec = FieldSpec::rationals();
    Json payload;
    if (name == "J") {
        payload = matrix_to_json(j_matrix(spec, r));
    } else if (name == "W1") {
        payload = matrix_to_json(w1_matrix(spec, r));
    } else if (name == "W2") {
        payload = matrix_to_json(w2_matrix(spec, r));
    } else if (name == "g") {
        payload = map_to_json(g_map(spec, r));
    } else if (name == "p") {
        payload = map_to_json(p_map(spec, r));
    } else if (name == "S1") {
        payload = Json::array();
        for (int k = 1; k <= 3; ++k) {
            std::vector<Scalar> d;
            d.reserve(static_cast<std::size_t>(r));
            for (int i = 1; i <= r; ++i) {
                d.push_back(scalar_pow(Scalar::from_int(spec, k),
                                       static_cast<unsigned long>(i) *
                                           static_cast<unsigned long>(i - 1) / 2));
            }
            payload.push_back(matrix_to_json(s1_element(spec, r, d)));
        }
    } else if (name == "S2") {
        payload = Json::array();
        for (int i = 1; i < r; ++i) {
            for (int j = i + 1; j <= r; ++j) {
                payload.push_back(matrix_to_json(s2_element(spec, r, i, j)));
            }
        }
    } else {
        throw domain_error("unknown example name: " + name);
    }
    std::cout << payload.dump() << "\n";
    return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"exact analysis of centralizing and commuting maps on strictly upper "
                 "triangular matrix rings"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(nilcentral::kToolName) + " " +
                                          nilcentral::kVersion);
    std::uint64_t seed = 0;
    app.add_option("--seed", seed, "seed for randomized checks")->capture_default_str();

    std::string decide_map, decide_property;
    CLI::App* decide = app.add_subcommand("decide", "decide a commutator property of a map");
    decide->add_option("--map", decide_map, "map JSON file")->required();
    decide->add_option("--property", decide_property, "property to decide")
        ->required()
        ->check(CLI::IsMember({"centralizing", "commuting"}));

    std::string decompose_map;
    CLI::App* decompose = app.add_subcommand("decompose", "canonical decomposition of a map");
    decompose->add_option("--map", decompose_map, "map JSON file")->required();

    int dims_r = 0;
    std::string dims_field = "Q";
    std::string dims_kind = "both";
    CLI::App* dims = app.add_subcommand("dims", "dimension census of map spaces");
    dims->add_option("--r", dims_r, "matrix size")->required();
    dims->add_option("--field", dims_field, "coefficient field, Q or F<p>")
        ->capture_default_str();
    dims->add_option("--kind", dims_kind, "which census to run")
        ->check(CLI::IsMember({"centralizing", "commuting", "both"}))
        ->capture_default_str();

    std::string centralizer_matrix;
    CLI::App* centralizer = app.add_subcommand("centralizer", "centralizer of a matrix");
    centralizer->add_option("--matrix", centralizer_matrix, "matrix JSON file")->required();

    int span_r = 0;
    CLI::App* span = app.add_subcommand("span", "rank of the conjugate witness family");
    span->add_option("--r", span_r, "matrix size")->required();

    int identities_r_max = 8;
    CLI::App* identities = app.add_subcommand("identities", "run the identity check suite");
    identities->add_option("--r-max", identities_r_max, "largest matrix size")
        ->capture_default_str();

    std::vector<int> sweep_r;
    std::vector<std::string> sweep_p;
    std::string sweep_out;
    CLI::App* sweep = app.add_subcommand("sweep", "census sweep over a (r, field) grid");
    sweep->add_option("--r", sweep_r, "matrix sizes, comma separated")
        ->required()
        ->delimiter(',');
    sweep->add_option("--p", sweep_p, "fields, comma separated (Q or primes)")
        ->required()
        ->delimiter(',');
    sweep->add_option("--out", sweep_out, "write CSV here instead of stdout");

    int examples_r = 0;
    std::string examples_name;
    CLI::App* examples = app.add_subcommand("examples", "emit a named object as JSON");
    examples->add_option("--r", examples_r, "matrix size")->required();
    examples->add_option("--name", examples_name, "object name")
        ->required()
        ->check(CLI::IsMember({"g", "p", "J", "W1", "W2", "S1", "S2"}));

    // let the global --seed appear after a subcommand name too
    for (CLI::App* sub : app.get_subcommands([](const CLI::App*) { return true; })) {
        sub->fallthrough();
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (*decide) return run_decide(decide_map, decide_property);
        if (*decompose) return run_decompose(decompose_map);
        if (*dims) return run_dims(dims_r, dims_field, dims_kind);
        if (*centralizer) return run_centralizer(centralizer_matrix);
        if (*span) return run_span(span_r);
        if (*identities) return run_identities(identities_r_max, seed);
        if (*sweep) return run_sweep(sweep_r, sweep_p, sweep_out);
        if (*examples) return run_examples(examples_r, examples_name);
    } catch (const nilcentral::internal_error& e) {
        std::cerr << "internal inconsistency: " << e.what() << "\n";
        return kExitUsage;
    } catch (const nilcentral::error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    }
    return kExitUsage;
}
