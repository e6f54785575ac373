// Walks the reference 144x256 core through the analytical models.

#include <cstdio>

#include <ptc/area_model.hpp>
#include <ptc/link_budget.hpp>
#include <ptc/power_model.hpp>
#include <ptc/scenario.hpp>
#include <ptc/workload.hpp>

int main() {
  const ptc::DeviceCatalog cat;
  const ptc::CoreGeometry core{144, 256};
  const double f = ptc::pareto_frequency();

  const auto link = ptc::critical_path_il(core, cat, ptc::Baseline3D{});
  std::printf("critical path  %.2f dB\n", link.total());
  for (const auto& t : link.terms) std::printf("  %-22s %6.3f\n", t.label.c_str(), t.db);

  const auto power = ptc::total_power(core, cat, ptc::Baseline3D{}, {}, f);
  std::printf("power          %.2f W at %.3g Hz\n", power.total, f);
  for (const auto& e : power.breakdown) std::printf("  %-22s %8.4f W  %5.1f%%\n", e.label.c_str(), e.watts, 100 * e.fraction);

  const auto area = ptc::crossbar_area(core, cat);
  std::printf("area           %.1f x %.1f mm, %s reticle, %.1f mm^2 left\n", area.crossbar_w, area.crossbar_h,
              area.verdict.fits ? "fits" : "exceeds", area.verdict.residual_area);

  const auto sched = ptc::schedule(ptc::resnet50_workload(), core, cat.pcm());
  const auto perf = ptc::estimate_perf(sched, power, f, cat, {.allow_overclock = true});
  std::printf("resnet-50      %.0f FPS, %.1f mJ/inference, %.1f TOPS/W\n", perf.fps,
              perf.energy_per_inference * 1e3, perf.tops_per_w);
}
