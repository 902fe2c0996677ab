#include "trionlab/cylinder_basis.hpp"
#include "trionlab/errors.hpp"
#include "trionlab/exponent_optimizer.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>

using namespace trionlab;
using namespace trionlab::optimizer;
using basis::PresetKind;

namespace {

const OptimizationRun& reference_run()
{
    static const OptimizationRun run = optimize(Problem::Exciton, basis::preset_basis(PresetKind::Exciton2D), 0.1);
    return run;
}

void check_run_invariants(const OptimizationRun& run)
{
    REQUIRE(!run.history.empty());
    for (std::size_t n = 1; n < run.history.size(); ++n) CHECK(run.history[n] <= run.history[n - 1]);
    for (double a : run.final.axial.alphas_i) CHECK(a > 0.0);
    CHECK(run.error.empty());
}

} // namespace

TEST_SUITE("exponent-optimizer") {

TEST_CASE("permutation invariance")
{
    auto b = basis::preset_basis(PresetKind::Exciton2D);
    std::reverse(b.axial.alphas_i.begin(), b.axial.alphas_i.end());
    const auto run = optimize(Problem::Exciton, b, 0.1);
    check_run_invariants(run);
    check_run_invariants(reference_run());
    CHECK(reference_run().converged);
    CHECK(run.converged);
    CHECK(std::abs(run.history.back() - reference_run().history.back()) <= 1e-6);
}

TEST_CASE("basin robustness")
{
    auto b = basis::preset_basis(PresetKind::Exciton2D);
    b.axial.alphas_i[2] *= 10.0;
    const auto run = optimize(Problem::Exciton, b, 0.1);
    check_run_invariants(run);
    CHECK(std::abs(run.history.back() - reference_run().history.back()) <= 1e-4);
}

TEST_CASE("determinism")
{
    Settings s;
    s.max_steps = 3;
    const auto a = optimize(Problem::Exciton, basis::preset_basis(PresetKind::Exciton1D), 0.1, s);
    const auto b = optimize(Problem::Exciton, basis::preset_basis(PresetKind::Exciton1D), 0.1, s);
    CHECK(a.history == b.history);
    CHECK(a.final.axial.alphas_i == b.final.axial.alphas_i);
}

TEST_CASE("tied exponent lists stay tied")
{
    Settings s;
    s.max_steps = 2;
    const auto run = optimize(Problem::Trion, basis::preset_basis(PresetKind::Trion1D), 0.1, s);
    check_run_invariants(run);
    CHECK(run.final.axial.alphas_i == run.final.axial.alphas_j);
    CHECK(run.final.axial.alphas_i == run.final.axial.alphas_k);
}

TEST_CASE("problem names")
{
    CHECK(parse_problem(to_string(Problem::HartreeFock)) == Problem::HartreeFock);
    CHECK_THROWS_AS(parse_problem("dft"), DomainError);
}

}

TEST_SUITE("exponent-optimizer-published-set") {

TEST_CASE("published exciton set is near-stationary")
{
    const auto& run = reference_run();
    check_run_invariants(run);
    CHECK(run.converged);
    CHECK(run.history.front() - run.history.back() < 1e-3);
    CHECK(run.history.front() == doctest::Approx(objective(Problem::Exciton, run.initial, 0.1, {})));
}

}
