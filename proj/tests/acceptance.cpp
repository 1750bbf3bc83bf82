// Verification suite runner: one pass/fail line per criterion.
#include <cstdio>
#include <cstring>
#include <string>
#include <vector>

#include "bellit/repro.hpp"

int main(int argc, char** argv) {
    bellit::ReproOptions opts;
    std::vector<int> only;
    for (int i = 1; i < argc; ++i) {
        if (!strcmp(argv[i], "--only") && i + 1 < argc) {
            only.push_back(std::atoi(argv[++i]));
        } else if (!strcmp(argv[i], "--catalog") && i + 1 < argc) {
            opts.catalog_path = argv[++i];
        } else if (!strcmp(argv[i], "--workers") && i + 1 < argc) {
            opts.workers = std::atoi(argv[++i]);
        } else if (!strcmp(argv[i], "--seed") && i + 1 < argc) {
            opts.seed = std::strtoull(argv[++i], nullptr, 10);
        } else if (!strcmp(argv[i], "--list")) {
            for (int id = 1; id <= 13; ++id) std::printf("%d\n", id);
            return 0;
        } else {
            std::fprintf(stderr, "usage: acceptance [--only N]... [--catalog path] [--workers W] [--seed S]\n");
            return 2;
        }
    }
    auto results = bellit::run_repro(opts, only);
    bool all = true;
    for (const auto& r : results) all = all && r.pass;
    std::printf("%s\n", all ? "ALL PASS" : "FAILURES PRESENT");
    return all ? 0 : 1;
}
