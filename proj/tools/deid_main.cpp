#include <string>
#include <vector>

#include "deid/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return deid::cli::run(args);
}
