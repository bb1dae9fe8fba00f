#include "stefan/config.hpp"

#include <cstdlib>
#include <iostream>
#include <string>

namespace {

void usage(std::ostream& os)
{
    os << "usage: stefan <command> --config <path> --out <dir> [--seed N]\n"
          "commands:\n"
          "  solve        integral-equation free-boundary solve\n"
          "  oracle       exact traveling-front tables\n"
          "  certify      contraction constants, window and empirical check\n"
          "  fd           front-fixing finite-difference solve\n"
          "  compare      diff two trajectory CSV files\n"
          "  convergence  step-size refinement study\n"
          "exit codes: 0 ok, 1 numerical failure, 2 configuration error\n";
}

} // namespace

int main(int argc, char** argv)
{
    if (argc < 2) {
        usage(std::cerr);
        return 2;
    }
    stefan::RunManifest m;
    m.command = argv[1];
    if (m.command == "-h" || m.command == "--help") {
        usage(std::cout);
        return 0;
    }
    for (int i = 2; i < argc; ++i) {
        const std::string arg = argv[i];
        auto next = [&]() -> const char* {
            if (i + 1 >= argc) {
                std::cerr << "missing value for " << arg << "\n";
                std::exit(2);
            }
            return argv[++i];
        };
        if (arg == "--config")
            m.config_path = next();
        else if (arg == "--out")
            m.output_dir = next();
        else if (arg == "--seed")
            m.seed = std::strtoull(next(), nullptr, 10);
        else {
            std::cerr << "unknown option '" << arg << "'\n";
            usage(std::cerr);
            return 2;
        }
    }
    if (m.config_path.empty() || m.output_dir.empty()) {
        std::cerr << "--config and --out are required\n";
        usage(std::cerr);
        return 2;
    }
    return stefan::run(m);
}
