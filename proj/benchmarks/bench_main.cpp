#include <random>

#include <benchmark/benchmark.h>

#include "symflow/flow/density.hpp"
#include "symflow/flow/flow.hpp"
#include "symflow/frame.hpp"
#include "symflow/pinching.hpp"
#include "symflow/tensor.hpp"

using namespace symflow;

namespace {

CurvatureTensor random_tensor(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g;
  CurvatureTensor r;
  for (double& v : r.data()) v = g(rng);
  return r;
}

AdaptedFrame some_frame() {
  return adapted_frame_from_plane(Vec4(1.0, 0.2, -0.3, 0.5), Vec4(0.1, 0.9, 0.4, -0.2));
}

flow::SurfaceMesh perturbed_line(int resolution, const flow::AmbientCP2& amb) {
  flow::FixtureSpec f;
  f.kind = flow::FixtureKind::perturbed_line;
  f.amplitude = 0.05;
  f.resolution = resolution;
  return flow::make_initial_surface(f, amb);
}

}  // namespace

static void BM_ProjectToKahler(benchmark::State& state) {
  const CurvatureTensor r = random_tensor(1);
  project_to_kahler(r);  // builds the cached basis outside the timed loop
  for (auto _ : state) benchmark::DoNotOptimize(project_to_kahler(r));
}
BENCHMARK(BM_ProjectToKahler);

static void BM_HscExtrema(benchmark::State& state) {
  const CurvatureTensor r = sample_kahler_tensor(2, 1.0, 0.05).tensor;
  for (auto _ : state) benchmark::DoNotOptimize(hsc_extrema(r));
}
BENCHMARK(BM_HscExtrema);

static void BM_EcoBounds(benchmark::State& state) {
  const KahlerCurvatureModel m = sample_kahler_tensor(3, 1.0, 0.05);
  const AdaptedFrame f = some_frame();
  for (auto _ : state) benchmark::DoNotOptimize(check_eco_bounds(m.tensor, f, m.k1, m.k2));
}
BENCHMARK(BM_EcoBounds);

static void BM_KatoCheck(benchmark::State& state) {
  const KahlerCurvatureModel m = sample_kahler_tensor(4, 1.0, 0.05);
  const AdaptedFrame f = some_frame();
  const std::array<double, 8> s = {0.3, -1.2, 0.5, 0.7, 1.1, -0.4, 0.2, 0.9};
  for (auto _ : state) {
    const GradSFF t = build_grad_sff(s, m.tensor, f, CodazziSign::plus);
    benchmark::DoNotOptimize(check_kato_inequality(t, m.tensor, f, 0.1));
  }
}
BENCHMARK(BM_KatoCheck);

static void BM_SignAuditCell(benchmark::State& state) {
  std::vector<double> t(401);
  for (std::size_t i = 0; i < t.size(); ++i) t[i] = static_cast<double>(i) / 400.0;
  const pinching::PinchingParams p{1.002, 0.64, 1.0, 1.0};
  for (auto _ : state) benchmark::DoNotOptimize(pinching::c1_c2_sign_audit(p, t));
}
BENCHMARK(BM_SignAuditCell);

static void BM_VertexGeometry(benchmark::State& state) {
  const flow::AmbientCP2 amb(4.0);
  const flow::SurfaceMesh m = perturbed_line(static_cast<int>(state.range(0)), amb);
  const flow::MeshTopology topo = flow::MeshTopology::build(m, flow::stencil_points(4));
  for (auto _ : state) benchmark::DoNotOptimize(flow::vertex_geometry(m, amb, {}, &topo));
  state.counters["vertices"] = static_cast<double>(m.vertices.size());
}
BENCHMARK(BM_VertexGeometry)->Arg(16)->Arg(32)->Arg(64)->Unit(benchmark::kMillisecond);

static void BM_McfStep(benchmark::State& state) {
  const flow::AmbientCP2 amb(4.0);
  const flow::SurfaceMesh m = perturbed_line(static_cast<int>(state.range(0)), amb);
  const flow::MeshTopology topo = flow::MeshTopology::build(m, flow::stencil_points(4));
  for (auto _ : state) benchmark::DoNotOptimize(flow::mcf_step(m, amb, 0.1, {}, &topo));
}
BENCHMARK(BM_McfStep)->Arg(16)->Arg(32)->Arg(64)->Unit(benchmark::kMillisecond);

static void BM_GaussianDensity(benchmark::State& state) {
  const flow::AmbientCP2 amb(4.0);
  const flow::SurfaceMesh m = perturbed_line(64, amb);
  for (auto _ : state) benchmark::DoNotOptimize(flow::gaussian_density(m, amb, m.vertices[0], 0.1));
}
BENCHMARK(BM_GaussianDensity)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
