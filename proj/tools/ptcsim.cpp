// ptcsim: evaluate photonic tensor core design points from the command line.
//
// Exit codes: 0 ok / feasible, 1 configuration or usage error, 2 infeasible
// design point.

#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include <ptc/report.hpp>
#include <ptc/scenario.hpp>
#include <ptc/tinycnn.hpp>

namespace {

enum class Format { json, csv, table };

struct Common {
  std::string scenario_file;
  std::string catalog;
  std::string core;
  std::string variant;
  std::string profile;
  std::string workload;
  std::string format = "json";
  std::uint64_t seed = 0;
  bool seed_set = false;
  bool allow_overclock = false;
  bool wall_plug = false;
  bool compact_cell = false;
  int b_in = 0, b_w = 0, b_out = 0;
};

void add_common(CLI::App* cmd, Common& c, bool with_workload) {
  cmd->add_option("--scenario", c.scenario_file, "Scenario JSON; flags below override its fields");
  cmd->add_option("--catalog", c.catalog, std::string("Device catalog JSON (default: $") + ptc::kCatalogEnvVar +
                                              ", then built-in)");
  cmd->add_option("--core", c.core, "Core geometry HxW, e.g. 144x256");
  cmd->add_option("--variant", c.variant, "Architecture variant NAME[:k=v,...]");
  cmd->add_option("--profile", c.profile, "Frequency profile: default, pareto or custom:<Hz>");
  if (with_workload) cmd->add_option("--workload", c.workload, "Builtin workload name or layer-list JSON");
  cmd->add_option("--seed", c.seed, "Noise seed")->each([&](const std::string&) { c.seed_set = true; });
  cmd->add_option("--format", c.format, "Output format")->check(CLI::IsMember({"json", "csv", "table"}));
  cmd->add_flag("--allow-overclock", c.allow_overclock, "Permit clocks above the modulator max_rate");
  cmd->add_flag("--wall-plug", c.wall_plug, "Divide laser power by the catalog wall-plug efficiency");
  cmd->add_flag("--compact-cell", c.compact_cell, "Use the compact PCM cell footprint for area");
  cmd->add_option("--b-in", c.b_in, "Input DAC bits");
  cmd->add_option("--b-w", c.b_w, "Weight bits");
  cmd->add_option("--b-out", c.b_out, "Output ADC bits");
}

ptc::Scenario build_scenario(const Common& c) {
  ptc::Scenario s = c.scenario_file.empty() ? ptc::Scenario{} : ptc::load_scenario(c.scenario_file);
  if (!c.catalog.empty()) s.catalog_path = c.catalog;
  if (!c.core.empty()) s.geometry = ptc::parse_core(c.core);
  if (!c.variant.empty()) s.variant = ptc::parse_variant(c.variant);
  if (!c.profile.empty()) s.profile = ptc::parse_profile(c.profile);
  if (!c.workload.empty()) s.workload = c.workload;
  if (c.seed_set) s.noise.seed = c.seed;
  s.allow_overclock |= c.allow_overclock;
  s.wall_plug |= c.wall_plug;
  s.area.compact_cell |= c.compact_cell;
  if (c.b_in) s.precision.b_in = c.b_in;
  if (c.b_w) s.precision.b_w = c.b_w;
  if (c.b_out) s.precision.b_out = c.b_out;
  return s;
}

Format parse_format(const std::string& f) {
  if (f == "csv") return Format::csv;
  if (f == "table") return Format::table;
  return Format::json;
}

void emit(const ptc::Table& t, Format fmt, ptc::ojson header, const char* key) {
  switch (fmt) {
    case Format::csv: std::cout << t.csv(); break;
    case Format::table: std::cout << t.text(); break;
    case Format::json:
      header[key] = t.json();
      std::cout << ptc::dump(header);
      break;
  }
}

std::vector<std::string> split(const std::string& s) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (start <= s.size()) {
    auto comma = s.find(',', start);
    if (comma == std::string::npos) comma = s.size();
    if (comma > start) out.push_back(s.substr(start, comma - start));
    start = comma + 1;
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Photonic tensor core design-space simulator"};
  app.set_version_flag("--version", std::string(ptc::kToolVersion));
  app.require_subcommand(1);

  Common lb_opts, ev_opts, ab_opts, sw_opts;
  auto* linkbudget = app.add_subcommand("linkbudget", "Critical-path insertion loss and feasibility");
  add_common(linkbudget, lb_opts, false);

  auto* evaluate = app.add_subcommand("evaluate", "Link budget, power, area and workload performance");
  add_common(evaluate, ev_opts, true);

  auto* ablate = app.add_subcommand("ablate", "Power and loss across architecture variants");
  add_common(ablate, ab_opts, false);
  std::string variants;
  ablate->add_option("--variants", variants, "Comma-separated variants (default: all seven)");

  auto* sweep = app.add_subcommand("sweep", "Throughput and energy across core sizes");
  add_common(sweep, sw_opts, true);
  std::string cores;
  sweep->add_option("--cores", cores, "Comma-separated HxW list (default: 9x8 ... 144x256)");

  auto* simulate = app.add_subcommand("simulate", "Noisy functional inference of a small CNN");
  std::string model = "tinycnn", sim_format = "json";
  ptc::tinycnn::SimulationOptions sim;
  simulate->add_option("--model", model, "Model name")->check(CLI::IsMember({"tinycnn"}));
  simulate->add_option("--sigma-in", sim.noise.sigma_in, "Relative input noise");
  simulate->add_option("--sigma-w", sim.noise.sigma_w, "Relative weight noise");
  simulate->add_option("--sigma-out", sim.noise.sigma_out, "Relative output noise");
  simulate->add_option("--seed", sim.noise.seed, "Noise seed");
  simulate->add_option("--samples", sim.samples, "Dataset size")->check(CLI::PositiveNumber);
  simulate->add_option("--threads", sim.threads, "Worker threads")->check(CLI::PositiveNumber);
  simulate->add_option("--b-in", sim.precision.b_in, "Input bits");
  simulate->add_option("--b-w", sim.precision.b_w, "Weight bits");
  simulate->add_option("--b-out", sim.precision.b_out, "Output bits (0: ideal readout)");
  simulate->add_option("--format", sim_format, "Output format")->check(CLI::IsMember({"json", "csv", "table"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 1;
  }

  try {
    if (linkbudget->parsed()) {
      const auto s = build_scenario(lb_opts);
      const auto cat = ptc::resolve_catalog(s.catalog_path);
      s.geometry.validate();
      const auto link = ptc::critical_path_il(s.geometry, cat, s.variant);
      const auto feas = ptc::variant_feasibility(link, cat.laser(), cat.pd());
      const Format fmt = parse_format(lb_opts.format);
      if (fmt == Format::json) {
        auto j = ptc::report_header(cat, "linkbudget");
        j["link_budget"] = ptc::to_json(link);
        j["verdict"] = feas.feasible ? "feasible" : "infeasible";
        j["feasibility"] = ptc::to_json(feas);
        std::cout << ptc::dump(j);
      } else {
        auto t = ptc::link_budget_table(link);
        t.rows.push_back({"margin", ptc::format_g(feas.margin_db)});
        std::cout << (fmt == Format::csv ? t.csv() : t.text());
      }
      return feas.feasible ? 0 : 2;
    }

    if (evaluate->parsed()) {
      const auto s = build_scenario(ev_opts);
      const auto cat = ptc::resolve_catalog(s.catalog_path);
      const auto e = ptc::evaluate(s, cat);
      const Format fmt = parse_format(ev_opts.format);
      if (fmt == Format::json) {
        auto j = ptc::report_header(cat, "evaluate");
        j.update(ptc::to_json(e, s, cat));
        std::cout << ptc::dump(j);
      } else {
        ptc::Table t{{"metric", "value"}, {}};
        auto row = [&](const char* k, double v) { t.rows.push_back({k, ptc::format_g(v)}); };
        t.rows.push_back({"core", s.geometry.label()});
        t.rows.push_back({"variant", ptc::variant_name(s.variant)});
        t.rows.push_back({"verdict", e.feasibility.feasible ? "feasible" : "infeasible"});
        row("frequency_hz", e.frequency);
        row("il_db", e.link.total());
        row("margin_db", e.feasibility.margin_db);
        row("total_power_w", e.power.total);
        t.rows.push_back({"top_contributor", e.power.dominant().label});
        row("width_mm", e.area.crossbar_w);
        row("height_mm", e.area.crossbar_h);
        t.rows.push_back({"fits_reticle", e.area.verdict.fits ? "yes" : "no"});
        row("residual_mm2", e.area.verdict.residual_area);
        row("fps", e.perf.fps);
        row("mj_per_inference", e.perf.energy_per_inference * 1e3);
        row("peak_tops", e.perf.peak_tops);
        row("tops_per_w", e.perf.tops_per_w);
        row("fps_per_w", e.perf.fps_per_w);
        std::cout << (fmt == Format::csv ? t.csv() : t.text());
      }
      return e.feasibility.feasible ? 0 : 2;
    }

    if (ablate->parsed()) {
      auto base = build_scenario(ab_opts);
      if (ab_opts.profile.empty() && ab_opts.scenario_file.empty()) base.profile = ptc::parse_profile("pareto");
      const auto cat = ptc::resolve_catalog(base.catalog_path);
      std::vector<ptc::Scenario> points;
      if (variants.empty()) {
        for (const auto& v : ptc::all_variants()) {
          points.push_back(base);
          points.back().variant = v;
        }
      } else {
        const auto names = split(variants);
        if (names.empty()) throw ptc::validation_error("variants", "empty design-point list");
        for (std::size_t i = 0; i < names.size(); ++i) {
          points.push_back(base);
          try {
            points.back().variant = ptc::parse_variant(names[i]);
          } catch (const ptc::validation_error& e) {
            throw ptc::validation_error("point[" + std::to_string(i) + "]." + e.field(), e.message());
          }
        }
      }
      const auto rows = ptc::ablate(points, cat);
      emit(ptc::ablation_table(rows), parse_format(ab_opts.format), ptc::report_header(cat, "ablate"), "rows");
      return 0;
    }

    if (sweep->parsed()) {
      auto base = build_scenario(sw_opts);
      if (sw_opts.profile.empty() && sw_opts.scenario_file.empty()) base.profile = ptc::parse_profile("pareto");
      const auto cat = ptc::resolve_catalog(base.catalog_path);
      const auto list = cores.empty() ? ptc::default_sweep_cores() : split(cores);
      if (list.empty()) throw ptc::validation_error("cores", "empty design-point list");
      std::vector<ptc::Scenario> points;
      for (std::size_t i = 0; i < list.size(); ++i) {
        points.push_back(base);
        try {
          points.back().geometry = ptc::parse_core(list[i]);
        } catch (const ptc::validation_error& e) {
          throw ptc::validation_error("point[" + std::to_string(i) + "]." + e.field(), e.message());
        }
      }
      const auto rows = ptc::sweep(points, cat, ptc::resolve_workload(base.workload));
      emit(ptc::sweep_table(rows), parse_format(sw_opts.format), ptc::report_header(cat, "sweep"), "rows");
      return 0;
    }

    if (simulate->parsed()) {
      sim.noise.validate();
      if (sim.precision.b_in < 1 || sim.precision.b_w < 1 || sim.precision.b_out < 0)
        throw ptc::validation_error("precision", "bit widths must be >= 1 (b_out >= 0)");
      const auto rep = ptc::tinycnn::simulate(sim);
      const Format fmt = parse_format(sim_format);
      if (fmt == Format::json) {
        auto j = ptc::report_header(ptc::DeviceCatalog{}, "simulate");
        j["model"] = model;
        j["noise"] = {{"sigma_in", ptc::num(sim.noise.sigma_in)},
                      {"sigma_w", ptc::num(sim.noise.sigma_w)},
                      {"sigma_out", ptc::num(sim.noise.sigma_out)},
                      {"seed", sim.noise.seed}};
        j["result"] = ptc::to_json(rep);
        std::cout << ptc::dump(j);
      } else {
        const auto t = ptc::simulation_table(rep);
        std::cout << (fmt == Format::csv ? t.csv() : t.text());
        if (fmt == Format::table)
          std::cout << "\naccuracy  float " << ptc::format_g(rep.float_accuracy, 4) << "  photonic "
                    << ptc::format_g(rep.photonic_accuracy, 4) << "  (" << rep.samples << " samples)\n";
      }
      return 0;
    }
  } catch (const ptc::validation_error& e) {
    std::cerr << "ptcsim: error: " << e.field() << ": " << e.message() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "ptcsim: error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
