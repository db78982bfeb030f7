#ifndef QSIM_TOKEN_BUCKET_HPP
#define QSIM_TOKEN_BUCKET_HPP

#include <algorithm>
#include <cstdint>
#include <stdexcept>

#include "qsim/time.hpp"

namespace qsim {

// Token bucket policer. Starts full; conforms(size) refills for the time
// elapsed since the last call, then consumes the packet's bits if they
// fit. Over any interval T the conforming bytes are bounded by
// rate * T + depth.
class TokenBucket {
public:
    TokenBucket(double rate_bps, double depth_bits, SimTime start = SimTime())
        : rate_bps_(rate_bps), depth_bits_(depth_bits), tokens_(depth_bits),
          last_(start) {
        if (rate_bps <= 0.0 || depth_bits <= 0.0) {
            throw std::invalid_argument("TokenBucket: rate and depth must be positive");
        }
    }

    bool conforms(std::uint64_t size_bits, SimTime now) {
        refill(now);
        const double need = static_cast<double>(size_bits);
        if (tokens_ >= need) {
            tokens_ -= need;
            return true;
        }
        return false;
    }

    double tokens(SimTime now) {
        refill(now);
        return tokens_;
    }

private:
    void refill(SimTime now) {
        if (now > last_) {
            tokens_ = std::min(depth_bits_, tokens_ + rate_bps_ * (now - last_).sec());
        }
        last_ = std::max(last_, now);
    }

    double rate_bps_;
    double depth_bits_;
    double tokens_;
    SimTime last_;
};

} // namespace qsim

#endif // QSIM_TOKEN_BUCKET_HPP
