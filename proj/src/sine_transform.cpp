#include "zeno/sine_transform.hpp"

#include <fftw3.h>

#include <algorithm>
#include <mutex>
#include <stdexcept>
#include <string>

namespace zeno {

namespace {

// The FFTW planner keeps global state; creation and destruction of plans
// must be serialized, execution need not be.
std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
}

void init_threads_once() {
    static std::once_flag flag;
    std::call_once(flag, [] {
        if (fftw_init_threads() == 0) throw std::runtime_error("fftw_init_threads failed");
    });
}

}  // namespace

void* aligned_alloc_bytes(std::size_t bytes) {
    void* p = fftw_malloc(bytes == 0 ? 1 : bytes);
    if (!p) throw std::bad_alloc();
    return p;
}

void aligned_free_bytes(void* p) noexcept { fftw_free(p); }

struct SineTransform2D::Plan {
    fftw_plan handle = nullptr;
    ComplexBuffer scratch;
    std::size_t offset = 0;  // in doubles, position of interior (1, 1)

    ~Plan() {
        if (handle) {
            std::lock_guard lock(planner_mutex());
            fftw_destroy_plan(handle);
        }
    }
};

SineTransform2D::SineTransform2D(int intervals_y, int intervals_z, int threads)
    : ny_(intervals_y), nz_(intervals_z), plan_(std::make_unique<Plan>()) {
    if (ny_ < 2 || nz_ < 2) throw std::invalid_argument("SineTransform2D: need at least 2 intervals per axis");
    if (threads < 1) throw std::invalid_argument("SineTransform2D: threads must be >= 1");
    plan_->scratch.assign(array_size(), 0.0);
    const int row = 2 * (nz_ + 1);
    plan_->offset = static_cast<std::size_t>(row + 2);

    fftw_iodim dims[2] = {{ny_ - 1, row, row}, {nz_ - 1, 2, 2}};
    fftw_iodim parts[1] = {{2, 1, 1}};
    const fftw_r2r_kind kinds[2] = {FFTW_RODFT00, FFTW_RODFT00};
    double* base = reinterpret_cast<double*>(plan_->scratch.data()) + plan_->offset;

    // FFTW_ESTIMATE selects the plan without timing, so results are
    // reproducible bit for bit from run to run.
    std::lock_guard lock(planner_mutex());
    if (threads > 1) {
        init_threads_once();
        fftw_plan_with_nthreads(threads);
    } else {
        fftw_plan_with_nthreads(1);
    }
    plan_->handle = fftw_plan_guru_r2r(2, dims, 1, parts, base, base, kinds, FFTW_ESTIMATE);
    if (!plan_->handle) throw std::runtime_error("SineTransform2D: FFTW could not create a plan");
}

SineTransform2D::~SineTransform2D() = default;
SineTransform2D::SineTransform2D(SineTransform2D&&) noexcept = default;
SineTransform2D& SineTransform2D::operator=(SineTransform2D&&) noexcept = default;

void SineTransform2D::raw(std::span<std::complex<double>> values) const {
    if (values.size() != array_size())
        throw std::invalid_argument("SineTransform2D: array has " + std::to_string(values.size()) +
                                    " entries, expected " + std::to_string(array_size()));
    double* target = reinterpret_cast<double*>(values.data()) + plan_->offset;
    double* planned = reinterpret_cast<double*>(plan_->scratch.data()) + plan_->offset;
    if (fftw_alignment_of(target) == fftw_alignment_of(planned)) {
        fftw_execute_r2r(plan_->handle, target, target);
        return;
    }
    std::copy(values.begin(), values.end(), plan_->scratch.begin());
    fftw_execute_r2r(plan_->handle, planned, planned);
    std::copy(plan_->scratch.begin(), plan_->scratch.end(), values.begin());
}

void SineTransform2D::forward(std::span<std::complex<double>> values) const {
    raw(values);
    // FFTW's RODFT00 carries a factor 2 per axis.
    const double scale = 1.0 / (static_cast<double>(ny_) * nz_);
    for (auto& v : values) v *= scale;
}

void SineTransform2D::inverse(std::span<std::complex<double>> values) const {
    raw(values);
    for (auto& v : values) v *= 0.25;
}

std::vector<std::complex<double>> sine_transform_2d(std::span<const std::complex<double>> values, int intervals_y,
                                                    int intervals_z) {
    SineTransform2D t(intervals_y, intervals_z);
    std::vector<std::complex<double>> out(values.begin(), values.end());
    t.forward(out);
    return out;
}

std::vector<std::complex<double>> inverse_sine_transform_2d(std::span<const std::complex<double>> coefficients,
                                                            int intervals_y, int intervals_z) {
    SineTransform2D t(intervals_y, intervals_z);
    std::vector<std::complex<double>> out(coefficients.begin(), coefficients.end());
    t.inverse(out);
    return out;
}

}  // namespace zeno
