// Acceptance suite: one line per criterion, nonzero exit on any failure.

#include <cstdlib>
#include <iostream>

#include <fbmlab/acceptance.hpp>

int main(int argc, char** argv) {
    fbmlab::AcceptanceOptions opt;
    opt.seed = 42;
    opt.log = &std::cout;
    if (argc > 1) opt.paths_scale = std::atof(argv[1]);

    const auto results = fbmlab::run_acceptance(opt);

    bool all = true;
    for (const auto& r : results) all = all && r.pass;
    std::cout << "suite hash: " << fbmlab::acceptance_detail::suite_hash(results) << "\n";
    std::cout << (all ? "ALL CRITERIA PASS" : "CRITERIA FAILED") << "\n";
    return all ? 0 : 1;
}
