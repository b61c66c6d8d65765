#pragma once

#include <filesystem>
#include <string>
#include <string_view>

namespace confcurv::cli {

inline constexpr int kExitPass = 0;
inline constexpr int kExitFail = 1;
inline constexpr int kExitValidation = 2;
inline constexpr int kExitNonconvergence = 3;

/// $CONFCURV_OUTPUT_DIR when set and non-empty, else the working directory.
[[nodiscard]] std::filesystem::path default_output_dir();

/// Writes through a temporary sibling and renames it into place, creating
/// parent directories as needed.
void write_atomic(const std::filesystem::path& path, std::string_view content);

/// Parses a decimal number, a fraction "a/b" or "inf". Throws DomainError
/// (range) naming `what` on anything else.
[[nodiscard]] double parse_number(std::string_view text, std::string_view what);

}  // namespace confcurv::cli
