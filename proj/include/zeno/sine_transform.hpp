#pragma once

#include <complex>
#include <cstddef>
#include <memory>
#include <new>
#include <span>
#include <vector>

namespace zeno {

/// Allocator returning SIMD-aligned storage so FFTW plans made on one buffer
/// can run on any other buffer from the same allocator.
template <class T>
struct AlignedAllocator {
    using value_type = T;
    AlignedAllocator() = default;
    template <class U>
    AlignedAllocator(const AlignedAllocator<U>&) {}
    T* allocate(std::size_t n);
    void deallocate(T* p, std::size_t) noexcept;
    template <class U>
    bool operator==(const AlignedAllocator<U>&) const { return true; }
};

void* aligned_alloc_bytes(std::size_t bytes);
void aligned_free_bytes(void* p) noexcept;

template <class T>
T* AlignedAllocator<T>::allocate(std::size_t n) {
    return static_cast<T*>(aligned_alloc_bytes(n * sizeof(T)));
}

template <class T>
void AlignedAllocator<T>::deallocate(T* p, std::size_t) noexcept {
    aligned_free_bytes(p);
}

using ComplexBuffer = std::vector<std::complex<double>, AlignedAllocator<std::complex<double>>>;

/// Two-dimensional DST-I on a complex (N_Y + 1) x (N_Z + 1) row-major array
/// whose boundary rows and columns are zero. Only the interior is touched.
///
///   forward: F_mn = 4 / (N_Y N_Z) sum_kl Psi_kl sin(m pi k / N_Y) sin(n pi l / N_Z)
///   inverse: Psi_kl = sum_mn F_mn sin(m pi k / N_Y) sin(n pi l / N_Z)
///
/// Coefficient F_mn is stored at the position of Psi_mn.
class SineTransform2D {
public:
    SineTransform2D(int intervals_y, int intervals_z, int threads = 1);
    ~SineTransform2D();
    SineTransform2D(SineTransform2D&&) noexcept;
    SineTransform2D& operator=(SineTransform2D&&) noexcept;
    SineTransform2D(const SineTransform2D&) = delete;
    SineTransform2D& operator=(const SineTransform2D&) = delete;

    int intervals_y() const { return ny_; }
    int intervals_z() const { return nz_; }
    std::size_t array_size() const { return static_cast<std::size_t>(ny_ + 1) * (nz_ + 1); }

    void forward(std::span<std::complex<double>> values) const;
    void inverse(std::span<std::complex<double>> values) const;

    /// The unnormalized transform: sum_kl Psi_kl sin sin, with no prefactor.
    void raw(std::span<std::complex<double>> values) const;

private:
    struct Plan;
    int ny_ = 0;
    int nz_ = 0;
    std::unique_ptr<Plan> plan_;
};

std::vector<std::complex<double>> sine_transform_2d(std::span<const std::complex<double>> values, int intervals_y,
                                                    int intervals_z);
std::vector<std::complex<double>> inverse_sine_transform_2d(std::span<const std::complex<double>> coefficients,
                                                            int intervals_y, int intervals_z);

}  // namespace zeno
