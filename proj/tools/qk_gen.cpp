/*
 * qk-gen — emit a random gradable quadratic presentation in the qkoszul
 * file format.  Deterministic for a fixed seed.
 */
#include <iostream>
#include <random>

#include <CLI11.hpp>

#include "qk/gen.hpp"
#include "qk/io.hpp"

int main(int argc, char** argv) {
    CLI::App app{"random gradable quadratic presentation generator"};
    unsigned long long seed = 1;
    qk::gen::RandomPresentationParams par;
    long long p = 32003;
    app.add_option("--seed", seed, "RNG seed")->default_val(1);
    app.add_option("--min-vertices", par.min_vertices)->default_val(2);
    app.add_option("--max-vertices", par.max_vertices)->default_val(6);
    app.add_option("--max-arrows", par.max_arrows)->default_val(10);
    app.add_option("--p", p, "field characteristic")->default_val(32003);
    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }
    if (par.min_vertices < 1 || par.max_vertices < par.min_vertices || par.max_arrows < 1 ||
        p < 2) {
        std::cerr << "error: inconsistent generator parameters\n";
        return 2;
    }

    std::mt19937_64 rng(seed);
    auto pres = qk::gen::random_gradable_presentation(rng, qk::GF{p}, par);
    std::cout << fmt::format("# qk-gen --seed {} --min-vertices {} --max-vertices {} "
                             "--max-arrows {} --p {}\n",
                             seed, par.min_vertices, par.max_vertices, par.max_arrows, p)
              << qk::io::write_presentation(*pres, qk::infer_grading(pres->quiver()));
    return 0;
}
