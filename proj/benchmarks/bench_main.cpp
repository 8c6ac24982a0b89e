#include <benchmark/benchmark.h>

#include <cmath>
#include <random>

#include "pxlap/function_spec.hpp"
#include "pxlap/infconv.hpp"
#include "pxlap/operators.hpp"
#include "pxlap/viscosity_solver.hpp"
#include "pxlap/weak_solver.hpp"

using namespace pxlap;

namespace {

Domain unit_box(int n) { return Domain::box({0.0, 0.0}, {1.0, 1.0}, {n, n}); }

GridFunction wave(const Domain& d) {
    return GridFunction::sample(d, [](const Point& x) { return std::sin(3.0 * x[0]) * std::cos(2.0 * x[1]); });
}

DirichletProblem sine_problem(int n) {
    ProblemSpec ps;
    ps.domain.kind = "box";
    ps.exponent.kind = "sine";
    ps.exponent.base = 2.5;
    ps.exponent.amplitude = 0.5;
    ps.boundary.kind = "exp_cos";
    return make_problem(ps, n);
}

}  // namespace

static void BM_InfConvolve(benchmark::State& st) {
    const GridFunction u = wave(unit_box(static_cast<int>(st.range(0))));
    for (auto _ : st) benchmark::DoNotOptimize(inf_convolve(u, 0.01, 2.0).u_eps.values().data());
    st.SetComplexityN(st.range(0));
}
BENCHMARK(BM_InfConvolve)->Arg(32)->Arg(64)->Arg(128)->Unit(benchmark::kMillisecond);

static void BM_WeakSolve(benchmark::State& st) {
    const DirichletProblem prob = sine_problem(static_cast<int>(st.range(0)));
    for (auto _ : st) benchmark::DoNotOptimize(solve(prob).iterations);
}
BENCHMARK(BM_WeakSolve)->Arg(16)->Arg(32)->Unit(benchmark::kMillisecond);

static void BM_NodalResidual(benchmark::State& st) {
    const DirichletProblem prob = sine_problem(static_cast<int>(st.range(0)));
    const GridFunction u = harmonic_extension(prob);
    for (auto _ : st) benchmark::DoNotOptimize(nodal_residual(u, prob.p, 1e-8).values().data());
}
BENCHMARK(BM_NodalResidual)->Arg(64)->Arg(128);

static void BM_RelaxStep(benchmark::State& st) {
    const DirichletProblem prob = sine_problem(static_cast<int>(st.range(0)));
    const GridFunction u = harmonic_extension(prob);
    const double tau = relaxation_step(prob.domain(), prob.p, 0.9);
    for (auto _ : st) benchmark::DoNotOptimize(relax_step(u, prob.p, 1e-8, tau).values().data());
}
BENCHMARK(BM_RelaxStep)->Arg(64)->Arg(128);

static void BM_Operators(benchmark::State& st) {
    std::mt19937_64 rng(0);
    std::uniform_real_distribution<double> U(-1.0, 1.0);
    std::vector<OperatorSample> samples(1024);
    for (auto& s : samples) {
        s.x = Vector::Zero(2);
        s.jet.eta = Vector(2);
        s.jet.eta << U(rng), U(rng);
        s.jet.hess = Matrix(2, 2);
        const double off = U(rng);
        s.jet.hess << U(rng), off, off, U(rng);
        s.p = 1.5 + U(rng) * 0.4;
        s.dp = Vector(2);
        s.dp << U(rng), U(rng);
    }
    for (auto _ : st) {
        double acc = 0.0;
        for (const auto& s : samples) acc += normalized_pxlap(s) + strong_nondivergence_identity(s).second;
        benchmark::DoNotOptimize(acc);
    }
    st.SetItemsProcessed(st.iterations() * static_cast<int64_t>(samples.size()));
}
BENCHMARK(BM_Operators);
BENCHMARK_MAIN();
