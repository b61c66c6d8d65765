#include "confcurv/cli/output.hpp"

#include <charconv>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <system_error>

#include <unistd.h>

#include "confcurv/error.hpp"

namespace confcurv::cli {

std::filesystem::path default_output_dir() {
    const char* env = std::getenv("CONFCURV_OUTPUT_DIR");
    if (env != nullptr && *env != '\0') return env;
    return ".";
}

void write_atomic(const std::filesystem::path& path, std::string_view content) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::filesystem::path tmp = path;
    tmp += ".tmp." + std::to_string(::getpid());
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        out.write(content.data(), static_cast<std::streamsize>(content.size()));
        out.close();
        if (!out) throw std::runtime_error("cannot write " + tmp.string());
    }
    std::filesystem::rename(tmp, path);
}

namespace {

bool parse_plain(std::string_view text, double& value) {
    if (text.empty()) return false;
    if (text.front() == '+') text.remove_prefix(1);
    const auto* end = text.data() + text.size();
    const auto res = std::from_chars(text.data(), end, value);
    return res.ec == std::errc() && res.ptr == end && std::isfinite(value);
}

}  // namespace

double parse_number(std::string_view text, std::string_view what) {
    if (text == "inf" || text == "+inf") return std::numeric_limits<double>::infinity();
    double value = 0.0;
    if (const auto slash = text.find('/'); slash != std::string_view::npos) {
        double num = 0.0;
        double den = 0.0;
        if (parse_plain(text.substr(0, slash), num) && parse_plain(text.substr(slash + 1), den) && den != 0.0) {
            return num / den;
        }
    } else if (parse_plain(text, value)) {
        return value;
    }
    throw DomainError(condition::kRange,
                      std::string(what) + " must be a number, a fraction a/b or inf; got '" + std::string(text) + "'");
}

}  // namespace confcurv::cli
