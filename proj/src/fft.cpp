#include "mfl/fft.hpp"

#include <fftw3.h>

#include <algorithm>
#include <memory>
#include <mutex>

#include "mfl/error.hpp"

namespace mfl {

namespace {

// The FFTW planner is not reentrant.
std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
}

struct FftwFree {
    void operator()(fftw_complex* p) const noexcept { fftw_free(p); }
};

}  // namespace

std::vector<std::complex<double>> dft(const std::vector<std::complex<double>>& x, FftSign sign) {
    const std::size_t n = x.size();
    if (n == 0) return {};
    std::unique_ptr<fftw_complex, FftwFree> buf(fftw_alloc_complex(n));
    if (!buf) throw Error(ErrorKind::invalid_argument, "fftw allocation failed");

    fftw_plan plan;
    {
        std::lock_guard lock(planner_mutex());
        plan = fftw_plan_dft_1d(static_cast<int>(n), buf.get(), buf.get(),
                                sign == FftSign::forward ? FFTW_FORWARD : FFTW_BACKWARD, FFTW_ESTIMATE);
    }
    if (plan == nullptr) throw Error(ErrorKind::invalid_argument, "fftw planning failed");

    std::copy(x.begin(), x.end(), reinterpret_cast<std::complex<double>*>(buf.get()));
    fftw_execute(plan);
    std::vector<std::complex<double>> out(reinterpret_cast<std::complex<double>*>(buf.get()),
                                          reinterpret_cast<std::complex<double>*>(buf.get()) + n);
    {
        std::lock_guard lock(planner_mutex());
        fftw_destroy_plan(plan);
    }
    return out;
}

}  // namespace mfl
