#include <cstdio>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "nla/errors.hpp"
#include "nla/experiments.hpp"

int main(int argc, char** argv) {
  CLI::App app{"nla - numerical laboratory for a nonlocal convection-"
               "diffusion equation"};
  app.require_subcommand(1);

  struct SubOpts {
    std::string config;
    std::string out;
    std::vector<std::string> overrides;
  };
  std::vector<std::pair<CLI::App*, SubOpts>> subs;
  subs.reserve(nla::experiment_names().size());
  for (const auto& name : nla::experiment_names()) {
    CLI::App* sub = app.add_subcommand(name, "run the " + name + " experiment");
    subs.push_back({sub, {}});
    SubOpts& opts = subs.back().second;
    sub->add_option("--config", opts.config, "config file (key = value)")
        ->required();
    sub->add_option("--out", opts.out, "output directory override");
    sub->add_option("--override", opts.overrides,
                    "config override key=value (repeatable)");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;  // exit 2: usage / config problems
  }

  try {
    for (auto& [sub, opts] : subs) {
      if (!sub->parsed()) continue;
      nla::ExperimentConfig cfg = nla::parse_config_file(opts.config);
      if (!cfg.experiment.empty() && cfg.experiment != sub->get_name())
        throw nla::ConfigError("config names experiment '" + cfg.experiment +
                               "' but subcommand is '" + sub->get_name() +
                               "'");
      cfg.experiment = sub->get_name();
      for (const auto& ov : opts.overrides) nla::apply_override(cfg, ov);
      if (!opts.out.empty()) cfg.out_dir = opts.out;
      return nla::run(cfg);
    }
  } catch (const nla::ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 2;
  } catch (const nla::DomainOverflow& e) {
    std::fprintf(stderr, "runtime failure (domain overflow): %s\n", e.what());
    return 3;
  } catch (const nla::StabilityViolation& e) {
    std::fprintf(stderr, "runtime failure (instability): %s\n", e.what());
    return 3;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "runtime failure: %s\n", e.what());
    return 3;
  }
  return 2;
}
