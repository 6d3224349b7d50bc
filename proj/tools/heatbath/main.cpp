#include <exception>
#include <iostream>

#include <heatbath/error.hpp>

#include "commands.hpp"

int main(int argc, char** argv) {
  using namespace heatbath;
  CLI::App app{"heatbath: lossless loads, wave baths and the statistics of their boundary"};
  cli::Globals g;
  app.add_option("--seed", g.seed, "random seed")->capture_default_str();
  app.add_option("--out", g.out, "output directory")->capture_default_str();
  app.set_config("--config", "", "key = value file; a [command] section selects the subcommand");
  app.allow_config_extras(CLI::config_extras_mode::error);
  app.require_subcommand(1);
  app.fallthrough();
  std::vector<cli::Command> cmds = cli::register_commands(app);

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  for (const cli::Command& c : cmds) {
    if (!c.app->parsed()) continue;
    try {
      return c.run(g);
    } catch (const DomainError& e) {
      std::cerr << c.name << ": invalid parameters: " << e.what() << '\n';
      return 2;
    } catch (const ParseError& e) {
      std::cerr << c.name << ": " << e.what() << '\n';
      return 2;
    } catch (const ReflectionWindowError& e) {
      std::cerr << c.name << ": " << e.what() << '\n';
      return 2;
    } catch (const Error& e) {
      std::cerr << c.name << ": failed";
      if (!e.stage().empty()) std::cerr << " at stage " << e.stage();
      std::cerr << ": " << e.what() << '\n';
      return 1;
    } catch (const std::exception& e) {
      std::cerr << c.name << ": " << e.what() << '\n';
      return 1;
    }
  }
  return 2;
}
