#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "bellit/bell.hpp"
#include "bellit/symmetry.hpp"

namespace bellit {

// One archived Bell function: exact coefficients, how it can be rebuilt
// (iteration and/or transformation recipes), and the values it is expected
// to reproduce.
struct CatalogEntry {
    std::string id;
    BellFunction function;

    std::optional<Rational> expected_lhv;
    std::optional<double> expected_vc;
    std::optional<double> expected_nl_psi;
    std::optional<std::vector<Rational>> expected_spectrum;
    std::optional<uint64_t> expected_orbit;

    std::string provenance;
    std::string notes;

    struct Recipe {
        std::string source;  // catalog id
        std::string recipe;  // parse_recipe syntax
    };
    std::vector<Recipe> recipes;  // each must reproduce `function` exactly

    struct Construction {
        std::string op;      // "iterate" | "transform" | "cglmp" | "iterate_swapped"
        std::string f00, f01, source, recipe;
    };
    std::optional<Construction> construct;

    struct Restriction {
        int k0 = 0, k1 = 0;
        std::string equals;  // catalog id of restrict_last(function, k0, k1)
    };
    std::vector<Restriction> restrictions;
};

// A probability-form display transcribed verbatim, checked against its
// target entry up to affine normalization. Entries whose printed source is
// internally inconsistent are flagged suspect: they are listed by the
// verifier but do not fail it.
struct PrintedForm {
    std::string id;
    std::string target;   // catalog id
    std::string relabel;  // outcome relabeling applied to the target before
                          // comparison (the display's own gauge), if any
    ProbabilityForm form;
    Rational bound;
    bool suspect = false;
    std::string notes;
};

class Catalog {
  public:
    const std::vector<CatalogEntry>& entries() const { return entries_; }
    const std::vector<PrintedForm>& printed_forms() const { return printed_forms_; }
    bool has(const std::string& id) const { return index_.count(id) > 0; }
    const CatalogEntry& get(const std::string& id) const;
    const BellFunction& function(const std::string& id) const { return get(id).function; }

    static Catalog load(const std::string& path);
    static Catalog load_default();

  private:
    std::vector<CatalogEntry> entries_;
    std::vector<PrintedForm> printed_forms_;
    std::map<std::string, size_t> index_;
};

struct CatalogVerifyReport {
    int recipes_checked = 0;
    int constructions_checked = 0;
    int restrictions_checked = 0;
    int forms_checked = 0;
    std::vector<std::string> failures;
    std::vector<std::string> suspects;  // flagged printed material, with match status

    bool ok() const { return failures.empty(); }
    std::string to_json() const;
};

// Re-derives every entry from its recipes and constructions and checks the
// results against the stored coefficients; verifies restriction identities
// and printed probability forms.
CatalogVerifyReport verify_recipes(const Catalog& catalog);

std::string default_catalog_path();

}  // namespace bellit
