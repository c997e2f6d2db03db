#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

// Deterministic random numbers for tests.  std::mt19937_64 output is fixed
// by the standard, but std::normal_distribution is not, so the normal
// transform is done by hand (Box-Muller) to keep fixtures portable across
// standard libraries.
namespace testsupport {

class Rng {
  public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}

    // uniform on [0, 1)
    double uniform() {
        return double(gen_() >> 11) * 0x1.0p-53;
    }

    double normal() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        // u1 in (0, 1] so log never sees zero
        const double u1 = (double(gen_() >> 11) + 1.0) * 0x1.0p-53;
        const double u2 = double(gen_() >> 11) * 0x1.0p-53;
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double a = 6.283185307179586476925286766559 * u2;
        spare_ = r * std::sin(a);
        have_spare_ = true;
        return r * std::cos(a);
    }

  private:
    std::mt19937_64 gen_;
    double spare_ = 0.0;
    bool have_spare_ = false;
};

inline std::vector<double> normals(std::uint64_t seed, std::size_t n,
                                   double sigma = 1.0) {
    Rng rng(seed);
    std::vector<double> out(n);
    for (double& v : out) v = sigma * rng.normal();
    return out;
}

}  // namespace testsupport
