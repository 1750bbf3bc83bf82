#include "bellit/catalog.hpp"

#include <json.hpp>

#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace bellit {

using nlohmann::json;

namespace {

Rational rat_from_json(const json& j) {
    if (j.is_string()) return rat_parse(j.get<std::string>());
    if (j.is_number_integer()) return Rational(j.get<long>());
    throw std::invalid_argument("catalog: expected rational as string or integer");
}

// The two-party d-outcome function whose Bell inequality is the CGLMP one:
// w_00 = -sum_k k v_{d-k}/d, w_01 = w_10 = -sum_k k v_k/d, w_11 = +sum_k k v_k/d.
BellFunction cglmp_function(int d) {
    BellFunction f(2, d);
    std::vector<Rational> a00(d, Rational(0)), a01(d, Rational(0)), a11(d, Rational(0));
    for (int k = 1; k < d; ++k) {
        a00[d - k] += rat(-k, d);
        a01[k] += rat(-k, d);
        a11[k] += rat(k, d);
    }
    f.set_coeff(0b00, Coefficient::from_alphas(a00));
    f.set_coeff(0b01, Coefficient::from_alphas(a01));
    f.set_coeff(0b10, Coefficient::from_alphas(a01));
    f.set_coeff(0b11, Coefficient::from_alphas(a11));
    return f;
}

BellFunction build_construction(const CatalogEntry::Construction& c, int n, int d,
                                const std::map<std::string, size_t>& index,
                                const std::vector<CatalogEntry>& entries) {
    auto resolve = [&](const std::string& id) -> const BellFunction& {
        auto it = index.find(id);
        if (it == index.end())
            throw std::runtime_error("catalog: construction references unknown id " + id);
        return entries[it->second].function;
    };
    if (c.op == "cglmp") return cglmp_function(d);
    if (c.op == "iterate") return iterate(resolve(c.f00), resolve(c.f01));
    if (c.op == "iterate_swapped") {
        const BellFunction& f = resolve(c.source);
        return iterate(f, swap_all_settings(f));
    }
    if (c.op == "transform") {
        const BellFunction& f = resolve(c.source);
        return apply(parse_recipe(c.recipe, f.n(), f.d()), f);
    }
    (void)n;
    throw std::runtime_error("catalog: unknown construction op " + c.op);
}

}  // namespace

const CatalogEntry& Catalog::get(const std::string& id) const {
    auto it = index_.find(id);
    if (it == index_.end()) throw std::runtime_error("catalog: unknown id " + id);
    return entries_[it->second];
}

std::string default_catalog_path() {
    if (const char* env = std::getenv("BELLIT_CATALOG")) return env;
    return BELLIT_CATALOG_DEFAULT_PATH;
}

Catalog Catalog::load_default() { return load(default_catalog_path()); }

Catalog Catalog::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("catalog: cannot open " + path);
    json j = json::parse(in);

    Catalog cat;
    for (const auto& je : j.at("entries")) {
        CatalogEntry e;
        e.id = je.at("id").get<std::string>();
        int n = je.at("n").get<int>();
        int d = je.at("d").get<int>();

        if (je.contains("construct")) {
            const auto& jc = je.at("construct");
            CatalogEntry::Construction c;
            c.op = jc.at("op").get<std::string>();
            if (jc.contains("f00")) c.f00 = jc.at("f00").get<std::string>();
            if (jc.contains("f01")) c.f01 = jc.at("f01").get<std::string>();
            if (jc.contains("source")) c.source = jc.at("source").get<std::string>();
            if (jc.contains("recipe")) c.recipe = jc.at("recipe").get<std::string>();
            e.construct = c;
        }

        if (je.contains("coeffs")) {
            json fj{{"n", n}, {"d", d}, {"coeffs", je.at("coeffs")}};
            e.function = BellFunction::from_json(fj.dump());
        } else if (e.construct) {
            e.function = build_construction(*e.construct, n, d, cat.index_, cat.entries_);
        } else {
            throw std::runtime_error("catalog: entry " + e.id + " has neither coeffs nor construct");
        }
        if (e.function.n() != n || e.function.d() != d)
            throw std::runtime_error("catalog: entry " + e.id + " shape mismatch");

        if (je.contains("expected_lhv")) e.expected_lhv = rat_from_json(je.at("expected_lhv"));
        if (je.contains("expected_vc")) e.expected_vc = je.at("expected_vc").get<double>();
        if (je.contains("expected_nl_psi")) e.expected_nl_psi = je.at("expected_nl_psi").get<double>();
        if (je.contains("expected_orbit")) e.expected_orbit = je.at("expected_orbit").get<uint64_t>();
        if (je.contains("expected_spectrum")) {
            std::vector<Rational> spec;
            for (const auto& v : je.at("expected_spectrum")) spec.push_back(rat_from_json(v));
            e.expected_spectrum = spec;
        }
        if (je.contains("provenance")) e.provenance = je.at("provenance").get<std::string>();
        if (je.contains("notes")) e.notes = je.at("notes").get<std::string>();
        if (je.contains("recipes"))
            for (const auto& jr : je.at("recipes"))
                e.recipes.push_back({jr.at("source").get<std::string>(),
                                     jr.at("recipe").get<std::string>()});
        if (je.contains("restrictions"))
            for (const auto& jr : je.at("restrictions"))
                e.restrictions.push_back({jr.at("k0").get<int>(), jr.at("k1").get<int>(),
                                          jr.at("equals").get<std::string>()});

        if (cat.index_.count(e.id)) throw std::runtime_error("catalog: duplicate id " + e.id);
        cat.index_[e.id] = cat.entries_.size();
        cat.entries_.push_back(std::move(e));
    }

    if (j.contains("printed_forms")) {
        for (const auto& jf : j.at("printed_forms")) {
            PrintedForm pf;
            pf.id = jf.at("id").get<std::string>();
            pf.target = jf.at("target").get<std::string>();
            json fj{{"n", jf.at("n")}, {"d", jf.at("d")}, {"weights", jf.at("weights")}};
            if (jf.contains("constant")) fj["constant"] = jf.at("constant");
            pf.form = ProbabilityForm::from_json(fj.dump());
            pf.bound = rat_from_json(jf.at("bound"));
            if (jf.contains("relabel")) pf.relabel = jf.at("relabel").get<std::string>();
            if (jf.contains("suspect")) pf.suspect = jf.at("suspect").get<bool>();
            if (jf.contains("notes")) pf.notes = jf.at("notes").get<std::string>();
            if (!cat.has(pf.target))
                throw std::runtime_error("catalog: printed form " + pf.id + " targets unknown id");
            cat.printed_forms_.push_back(std::move(pf));
        }
    }
    return cat;
}

CatalogVerifyReport verify_recipes(const Catalog& catalog) {
    CatalogVerifyReport report;
    for (const auto& e : catalog.entries()) {
        if (e.construct) {
            ++report.constructions_checked;
            std::map<std::string, size_t> index;
            for (size_t i = 0; i < catalog.entries().size(); ++i)
                index[catalog.entries()[i].id] = i;
            BellFunction rebuilt =
                build_construction(*e.construct, e.function.n(), e.function.d(), index,
                                   catalog.entries());
            if (!(rebuilt == e.function))
                report.failures.push_back("construction of " + e.id + " does not reproduce entry");
        }
        for (const auto& r : e.recipes) {
            ++report.recipes_checked;
            const BellFunction& src = catalog.function(r.source);
            BellFunction image = apply(parse_recipe(r.recipe, src.n(), src.d()), src);
            if (!(image == e.function))
                report.failures.push_back("recipe " + r.source + " /. {" + r.recipe +
                                          "} does not reproduce " + e.id);
        }
        for (const auto& r : e.restrictions) {
            ++report.restrictions_checked;
            BellFunction restricted = restrict_last(e.function, r.k0, r.k1);
            if (!(restricted == catalog.function(r.equals)))
                report.failures.push_back("restriction of " + e.id + " (" + std::to_string(r.k0) +
                                          "," + std::to_string(r.k1) + ") != " + r.equals);
        }
    }
    for (const auto& pf : catalog.printed_forms()) {
        ++report.forms_checked;
        const CatalogEntry& target = catalog.get(pf.target);
        BellFunction tf = target.function;
        if (!pf.relabel.empty()) tf = apply(parse_recipe(pf.relabel, tf.n(), tf.d()), tf);
        ProbabilityForm ours = to_probability_form(tf);
        std::optional<Rational> our_bound;
        if (target.expected_lhv) our_bound = *target.expected_lhv;
        AffineMatch m = affine_compare(pf.form, ours, pf.bound, our_bound);
        bool ok = m.proportional && (!our_bound || m.bounds_consistent);
        if (pf.suspect) {
            report.suspects.push_back(pf.id + (ok ? " [matches despite flag]" : " [mismatch]") +
                                      (pf.notes.empty() ? "" : " — " + pf.notes));
        } else if (!ok) {
            report.failures.push_back("printed form " + pf.id + " does not match " + pf.target);
        }
    }
    return report;
}

std::string CatalogVerifyReport::to_json() const {
    json j{{"recipes_checked", recipes_checked},
           {"constructions_checked", constructions_checked},
           {"restrictions_checked", restrictions_checked},
           {"forms_checked", forms_checked},
           {"failures", failures},
           {"suspects", suspects},
           {"ok", failures.empty()}};
    return j.dump();
}

}  // namespace bellit
