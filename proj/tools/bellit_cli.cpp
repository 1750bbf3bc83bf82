// bellit: construct (n,2,d) full-correlated Bell functions by the prime-d
// iteration rule, bound them classically by exact enumeration, optimize
// their GHZ violations, and explore the symmetry group.
#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <iostream>

#include "bellit/catalog.hpp"
#include "bellit/lhv.hpp"
#include "bellit/quantum.hpp"
#include "bellit/repro.hpp"
#include "bellit/search.hpp"
#include "bellit/symmetry.hpp"

using namespace bellit;
using nlohmann::json;

namespace {

struct Common {
    std::string catalog_path;
    std::string id, file;
    int workers = 0;
};

BellFunction load_function(const Common& c, const Catalog& cat) {
    if (!c.id.empty()) return cat.function(c.id);
    if (!c.file.empty()) {
        std::ifstream in(c.file);
        if (!in) throw std::runtime_error("cannot open " + c.file);
        std::stringstream ss;
        ss << in.rdbuf();
        return BellFunction::from_json(ss.str());
    }
    throw CLI::ValidationError("--id or --file is required");
}

std::vector<Rational> parse_spectrum(const std::string& s) {
    std::vector<Rational> out;
    std::string item;
    for (char ch : s) {
        if (ch == ',') {
            out.push_back(rat_parse(item));
            item.clear();
        } else if (!isspace((unsigned char)ch)) {
            item += ch;
        }
    }
    if (!item.empty()) out.push_back(rat_parse(item));
    return out;
}

void emit(const std::string& payload) { std::cout << payload << "\n"; }

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"full-correlated (n,2,d) Bell function toolkit"};
    app.require_subcommand(1);

    Common common;
    app.add_option("--catalog", common.catalog_path, "catalog JSON path");

    auto add_common = [&](CLI::App* cmd, bool with_input = true) {
        if (with_input) {
            cmd->add_option("--id", common.id, "catalog entry id");
            cmd->add_option("--file", common.file, "Bell function JSON file");
        }
        cmd->add_option("--workers", common.workers, "worker threads (0 = all cores)");
    };

    auto* cat_cmd = app.add_subcommand("catalog", "list, show or verify the archive");
    std::string cat_action = "list", cat_show_id;
    cat_cmd->add_option("action", cat_action, "list | show | verify")->required();
    cat_cmd->add_option("--id", cat_show_id, "entry to show");

    uint64_t budget = 100000000ull;
    auto* lhv_cmd = app.add_subcommand("lhv", "exact classical bound and value spectrum");
    add_common(lhv_cmd);
    lhv_cmd->add_option("--budget", budget, "max strategies to enumerate");

    auto* spectrum_cmd = app.add_subcommand("spectrum", "deterministic value spectrum check");
    add_common(spectrum_cmd);
    std::string expect_spectrum;
    spectrum_cmd->add_option("--expect", expect_spectrum, "comma-separated rationals");
    spectrum_cmd->add_option("--budget", budget, "max strategies to enumerate");

    auto* pf_cmd = app.add_subcommand("prob-form", "coincidence probability form");
    add_common(pf_cmd);

    auto* iter_cmd = app.add_subcommand("construct-iterate", "iterate two (n-1)-party functions");
    std::string f00_id, f01_id;
    iter_cmd->add_option("--f00", f00_id, "catalog id or JSON file")->required();
    iter_cmd->add_option("--f01", f01_id, "catalog id or JSON file")->required();

    auto* restrict_cmd = app.add_subcommand("restrict", "fix the last party's outcome labels");
    add_common(restrict_cmd);
    int k0 = 0, k1 = 0;
    restrict_cmd->add_option("--k0", k0, "label for setting 0")->required();
    restrict_cmd->add_option("--k1", k1, "label for setting 1")->required();

    QuantumOptions qopts;
    uint64_t cli_seed = 1;
    auto add_qopts = [&](CLI::App* cmd) {
        cmd->add_option("--restarts", qopts.restarts, "optimizer restarts");
        cmd->add_option("--tol", qopts.tol, "optimizer tolerance");
        cmd->add_option("--seed", cli_seed, "random seed");
        cmd->add_option("--budget", qopts.lhv_budget, "classical enumeration budget");
    };
    auto* qmax_cmd = app.add_subcommand("quantum-max", "maximal GHZ violation over phases");
    add_common(qmax_cmd);
    add_qopts(qmax_cmd);
    auto* vis_cmd = app.add_subcommand("visibility", "critical visibility report");
    add_common(vis_cmd);
    add_qopts(vis_cmd);

    auto* orbit_cmd = app.add_subcommand("orbit", "equivalence orbit size");
    add_common(orbit_cmd);
    uint64_t orbit_budget = 10000000ull;
    orbit_cmd->add_option("--budget", orbit_budget, "max orbit elements");

    auto* canon_cmd = app.add_subcommand("canon", "canonical form under the symmetry group");
    add_common(canon_cmd);
    uint64_t group_budget = 10000000ull;
    canon_cmd->add_option("--budget", group_budget, "max group order");

    auto* equiv_cmd = app.add_subcommand("equiv", "decide equivalence of two functions");
    add_common(equiv_cmd);
    std::string id2, file2;
    equiv_cmd->add_option("--id2", id2, "second catalog id");
    equiv_cmd->add_option("--file2", file2, "second function JSON file");
    equiv_cmd->add_option("--budget", group_budget, "max group order");
    uint64_t rand_trials = 200000ull;
    equiv_cmd->add_option("--trials", rand_trials, "random-search trials beyond the budget");
    equiv_cmd->add_option("--seed", cli_seed, "random seed");

    auto* cert_cmd = app.add_subcommand("certificate", "shift-class invariant certificate");
    add_common(cert_cmd);

    auto* proj_cmd = app.add_subcommand("verify-appendix-a",
                                        "observable-power projector reconstruction check");
    int proj_d = 3, proj_trials = 50;
    proj_cmd->add_option("--d", proj_d, "prime dimension")->required();
    proj_cmd->add_option("--trials", proj_trials, "random bases");
    proj_cmd->add_option("--seed", cli_seed, "random seed");

    auto* search_cmd = app.add_subcommand("search", "sweep the orbit as the second block");
    SearchConfig scfg;
    bool table_out = false;
    search_cmd->add_option("--seed00", scfg.seed00, "fixed block catalog id")->required();
    search_cmd->add_option("--orbit", scfg.orbit_source, "orbit source catalog id")->required();
    search_cmd->add_option("--restarts", scfg.restarts, "first-pass restarts");
    search_cmd->add_option("--refine-restarts", scfg.refine_restarts, "winner refinement restarts");
    search_cmd->add_option("--tie-tol", scfg.tie_tol, "winner tie tolerance on vc");
    search_cmd->add_option("--tol", scfg.tol, "optimizer tolerance");
    search_cmd->add_option("--seed", scfg.seed, "random seed");
    search_cmd->add_option("--budget", scfg.orbit_budget, "orbit budget");
    search_cmd->add_option("--workers", scfg.workers, "worker threads");
    search_cmd->add_flag("--table", table_out, "human-readable summary");
    bool include_winners = false;
    search_cmd->add_flag("--winners", include_winners, "include winner coefficients in JSON");

    auto* vc_cmd = app.add_subcommand("verify-candidate", "check spectrum and visibility");
    add_common(vc_cmd);
    add_qopts(vc_cmd);
    std::string vc_spectrum;
    double vc_expect = 0, vc_tol = 1e-4;
    vc_cmd->add_option("--spectrum", vc_spectrum, "expected spectrum, comma-separated")->required();
    vc_cmd->add_option("--vc", vc_expect, "expected critical visibility")->required();
    vc_cmd->add_option("--vc-tol", vc_tol, "visibility tolerance");

    auto* repro_cmd = app.add_subcommand("repro", "run the full verification suite");
    std::vector<int> repro_only;
    repro_cmd->add_option("--only", repro_only, "criterion ids to run");
    repro_cmd->add_option("--workers", common.workers, "worker threads");
    repro_cmd->add_option("--seed", cli_seed, "random seed");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) ? 2 : 0;
    }

    try {
        Catalog cat = common.catalog_path.empty() ? Catalog::load_default()
                                                  : Catalog::load(common.catalog_path);
        qopts.seed = cli_seed;
        qopts.workers = common.workers;

        if (cat_cmd->parsed()) {
            if (cat_action == "list") {
                json out = json::array();
                for (const auto& e : cat.entries())
                    out.push_back({{"id", e.id},
                                   {"n", e.function.n()},
                                   {"d", e.function.d()},
                                   {"provenance", e.provenance}});
                emit(out.dump(1));
            } else if (cat_action == "show") {
                const CatalogEntry& e = cat.get(cat_show_id);
                json out = json::parse(e.function.to_json());
                out["id"] = e.id;
                out["provenance"] = e.provenance;
                if (!e.notes.empty()) out["notes"] = e.notes;
                if (e.expected_lhv) out["expected_lhv"] = rat_str(*e.expected_lhv);
                if (e.expected_vc) out["expected_vc"] = *e.expected_vc;
                emit(out.dump(1));
            } else if (cat_action == "verify") {
                CatalogVerifyReport rep = verify_recipes(cat);
                emit(rep.to_json());
                return rep.ok() ? 0 : 1;
            } else {
                std::cerr << "unknown catalog action " << cat_action << "\n";
                return 2;
            }
        } else if (lhv_cmd->parsed()) {
            LhvOptions lo;
            lo.budget = budget;
            lo.workers = common.workers;
            emit(lhv_bound(load_function(common, cat), lo).to_json());
        } else if (spectrum_cmd->parsed()) {
            LhvOptions lo;
            lo.budget = budget;
            lo.workers = common.workers;
            LhvReport rep = lhv_bound(load_function(common, cat), lo);
            json out = json::parse(rep.to_json());
            if (!expect_spectrum.empty()) {
                std::vector<Rational> want = parse_spectrum(expect_spectrum);
                std::sort(want.begin(), want.end());
                bool ok = want == rep.spectrum;
                out["matches"] = ok;
                emit(out.dump());
                return ok ? 0 : 1;
            }
            emit(out.dump());
        } else if (pf_cmd->parsed()) {
            emit(to_probability_form(load_function(common, cat)).to_json());
        } else if (iter_cmd->parsed()) {
            auto resolve = [&](const std::string& ref) {
                if (cat.has(ref)) return cat.function(ref);
                std::ifstream in(ref);
                if (!in) throw std::runtime_error("not a catalog id or file: " + ref);
                std::stringstream ss;
                ss << in.rdbuf();
                return BellFunction::from_json(ss.str());
            };
            emit(iterate(resolve(f00_id), resolve(f01_id)).to_json());
        } else if (restrict_cmd->parsed()) {
            emit(restrict_last(load_function(common, cat), k0, k1).to_json());
        } else if (qmax_cmd->parsed() || vis_cmd->parsed()) {
            emit(optimize_phases(load_function(common, cat), qopts).to_json());
        } else if (orbit_cmd->parsed()) {
            OrbitOptions oo;
            oo.budget = orbit_budget;
            emit(orbit(load_function(common, cat), oo).to_json());
        } else if (canon_cmd->parsed()) {
            emit(canonical_form(load_function(common, cat), group_budget).to_json());
        } else if (equiv_cmd->parsed()) {
            BellFunction a = load_function(common, cat);
            Common c2{common.catalog_path, id2, file2, common.workers};
            BellFunction b = load_function(c2, cat);
            EquivalenceReport rep = decide_equivalent(a, b, group_budget, rand_trials, cli_seed);
            const char* verdict = rep.verdict == Equivalence::Equivalent     ? "equivalent"
                                  : rep.verdict == Equivalence::Inequivalent ? "inequivalent"
                                                                             : "unknown";
            emit(json{{"verdict", verdict}, {"method", rep.method}}.dump());
            return rep.verdict == Equivalence::Unknown ? 1 : 0;
        } else if (cert_cmd->parsed()) {
            emit(json{{"certificate", invariant_certificate(load_function(common, cat))}}.dump());
        } else if (proj_cmd->parsed()) {
            ProjectorCheck pc = verify_projector_identity(proj_d, proj_trials, cli_seed);
            emit(json{{"pass", pc.pass}, {"max_residual", pc.max_residual}}.dump());
            return pc.pass ? 0 : 1;
        } else if (search_cmd->parsed()) {
            SearchResult sr = run_search(cat, scfg);
            if (table_out) {
                std::printf("candidates %llu (optimized %llu)  min vc %.6f\n",
                            (unsigned long long)sr.candidates_evaluated,
                            (unsigned long long)sr.optimized_count, sr.min_vc);
                std::printf("winners: %llu raw, %llu distinct\n",
                            (unsigned long long)sr.raw_winner_count,
                            (unsigned long long)sr.dedup_winner_count);
                std::printf("vc histogram (1e-4 buckets):\n");
                for (const auto& [vc, count] : sr.histogram)
                    std::printf("  %.4f  %llu\n", vc, (unsigned long long)count);
            } else {
                emit(sr.to_json(include_winners));
            }
        } else if (vc_cmd->parsed()) {
            CandidateReport rep = verify_candidate(load_function(common, cat),
                                                   parse_spectrum(vc_spectrum), vc_expect, vc_tol,
                                                   qopts);
            emit(rep.to_json());
            return rep.pass() ? 0 : 1;
        } else if (repro_cmd->parsed()) {
            ReproOptions ro;
            ro.catalog_path = common.catalog_path;
            ro.workers = common.workers;
            ro.seed = cli_seed;
            auto results = run_repro(ro, repro_only);
            bool all = true;
            for (const auto& r : results) all = all && r.pass;
            return all ? 0 : 1;
        }
        return 0;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
