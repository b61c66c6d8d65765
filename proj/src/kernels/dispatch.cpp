#include <atomic>
#include <cstdlib>
#include <stdexcept>
#include <string>

#include "confcurv/kernels/esf_batch.hpp"

namespace confcurv::kernels {

namespace {

Isa detect() noexcept {
    if (const char* env = std::getenv("CONFCURV_SIMD")) {
        if (std::string(env) == "scalar") return Isa::scalar;
    }
    return cpu_has_avx2() ? Isa::avx2 : Isa::scalar;
}

std::atomic<Isa>& current() noexcept {
    static std::atomic<Isa> isa{detect()};
    return isa;
}

void check_sizes(int n, std::size_t count, std::size_t have_in, std::size_t need_in, std::size_t have_out,
                 std::size_t need_out) {
    if (n < 1) throw std::invalid_argument("esf kernel: n must be >= 1");
    if (have_in < need_in || have_out < need_out) {
        throw std::invalid_argument("esf kernel: buffer too small for n=" + std::to_string(n) +
                                    ", count=" + std::to_string(count));
    }
}

}  // namespace

std::string_view isa_name(Isa isa) noexcept { return isa == Isa::avx2 ? "avx2" : "scalar"; }

bool cpu_has_avx2() noexcept {
#if defined(__x86_64__) || defined(__i386__)
    return __builtin_cpu_supports("avx2");
#else
    return false;
#endif
}

Isa active_isa() noexcept { return current().load(std::memory_order_relaxed); }

Isa set_active_isa(Isa isa) noexcept {
    if (isa == Isa::avx2 && !cpu_has_avx2()) isa = Isa::scalar;
    current().store(isa, std::memory_order_relaxed);
    return isa;
}

void esf_batch(int n, std::size_t count, std::span<const double> lambda, std::span<double> sigma) {
    const auto un = static_cast<std::size_t>(n);
    check_sizes(n, count, lambda.size(), un * count, sigma.size(), (un + 1) * count);
    if (active_isa() == Isa::avx2) {
        avx2::esf_batch(n, count, lambda.data(), sigma.data());
    } else {
        scalar::esf_batch(n, count, lambda.data(), sigma.data());
    }
}

void esf_excluding_batch(int n, std::size_t count, std::span<const double> lambda, std::span<double> out) {
    const auto un = static_cast<std::size_t>(n);
    check_sizes(n, count, lambda.size(), un * count, out.size(), un * un * count);
    if (active_isa() == Isa::avx2) {
        avx2::esf_excluding_batch(n, count, lambda.data(), out.data());
    } else {
        scalar::esf_excluding_batch(n, count, lambda.data(), out.data());
    }
}

}  // namespace confcurv::kernels
