#include "confcurv/kernels/esf_batch.hpp"

namespace confcurv::kernels::scalar {

void esf_batch(int n, std::size_t count, const double* lambda, double* sigma) {
    for (std::size_t s = 0; s < count; ++s) sigma[s] = 1.0;
    for (int j = 1; j <= n; ++j) {
        double* row = sigma + static_cast<std::size_t>(j) * count;
        for (std::size_t s = 0; s < count; ++s) row[s] = 0.0;
    }
    for (int i = 0; i < n; ++i) {
        const double* x = lambda + static_cast<std::size_t>(i) * count;
        for (int j = i + 1; j >= 1; --j) {
            double* hi = sigma + static_cast<std::size_t>(j) * count;
            const double* lo = sigma + static_cast<std::size_t>(j - 1) * count;
            for (std::size_t s = 0; s < count; ++s) hi[s] = hi[s] + x[s] * lo[s];
        }
    }
}

void esf_excluding_batch(int n, std::size_t count, const double* lambda, double* out) {
    const auto un = static_cast<std::size_t>(n);
    for (std::size_t skip = 0; skip < un; ++skip) {
        double* table = out + skip * un * count;
        for (std::size_t s = 0; s < count; ++s) table[s] = 1.0;
        for (std::size_t j = 1; j < un; ++j) {
            for (std::size_t s = 0; s < count; ++s) table[j * count + s] = 0.0;
        }
        std::size_t used = 0;
        for (std::size_t i = 0; i < un; ++i) {
            if (i == skip) continue;
            ++used;
            const double* x = lambda + i * count;
            for (std::size_t j = used; j >= 1; --j) {
                double* hi = table + j * count;
                const double* lo = table + (j - 1) * count;
                for (std::size_t s = 0; s < count; ++s) hi[s] = hi[s] + x[s] * lo[s];
            }
        }
    }
}

}  // namespace confcurv::kernels::scalar
