#include <exception>
#include <iostream>
#include <string>
#include <vector>

#include "confcurv/cli/app.hpp"

int main(int argc, char** argv) {
    try {
        return confcurv::cli::run(std::vector<std::string>(argv + 1, argv + argc), std::cout, std::cerr);
    } catch (const std::exception& e) {
        std::cerr << "error [internal]: " << e.what() << "\n";
        return 1;
    }
}
