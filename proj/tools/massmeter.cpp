// massmeter: batch front-end for solve / verify / sweep / converge runs.

#include <cstdint>
#include <exception>
#include <filesystem>
#include <iostream>
#include <map>
#include <optional>
#include <string>

#include "CLI11.hpp"

#include "massmeter/commands.hpp"

namespace {

using Command = int (*)(const massmeter::RunConfig&, const std::filesystem::path&, std::ostream&);

const std::map<std::string, Command> commands{
    {"solve", massmeter::cmd_solve},
    {"verify", massmeter::cmd_verify},
    {"sweep", massmeter::cmd_sweep},
    {"converge", massmeter::cmd_converge},
};

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Neumann data mass on perturbed triangles"};
    std::string command;
    std::string config_path;
    std::optional<std::string> out_dir;
    std::optional<int> threads;
    std::optional<std::uint64_t> seed;
    app.add_option("command", command, "solve | verify | sweep | converge")
        ->required()
        ->check(CLI::IsMember({"solve", "verify", "sweep", "converge"}));
    app.add_option("--config", config_path, "run configuration (JSON)")->required();
    app.add_option("--out", out_dir, "output directory (overrides output.directory)");
    app.add_option("--threads", threads, "worker threads (overrides solver.threads)")->check(CLI::PositiveNumber);
    app.add_option("--seed", seed, "eigensolver start-vector seed (overrides solver.seed)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    try {
        auto cfg = massmeter::load_config(config_path);
        if (threads) cfg.solver.threads = *threads;
        if (seed) cfg.solver.seed = *seed;
        const std::filesystem::path out = out_dir ? *out_dir : cfg.output.directory;
        return commands.at(command)(cfg, out, std::cout);
    } catch (const massmeter::Error& e) {
        std::cerr << "massmeter: " << e.what() << '\n';
        return e.exit_code();
    } catch (const std::exception& e) {
        std::cerr << "massmeter: " << e.what() << '\n';
        return 1;
    }
}
