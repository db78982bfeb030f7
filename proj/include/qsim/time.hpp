#ifndef QSIM_TIME_HPP
#define QSIM_TIME_HPP

#include <compare>
#include <stdexcept>

namespace qsim {

// Simulation time in real-valued seconds. Always non-negative; durations
// are SimTime values too, so subtraction that would go negative throws.
class SimTime {
public:
    constexpr SimTime() = default;

    static SimTime seconds(double s) {
        if (s < 0.0) {
            throw std::invalid_argument("SimTime: negative seconds");
        }
        return SimTime(s);
    }

    constexpr double sec() const { return s_; }

    friend constexpr auto operator<=>(SimTime a, SimTime b) { return a.s_ <=> b.s_; }
    friend constexpr bool operator==(SimTime a, SimTime b) { return a.s_ == b.s_; }

    friend SimTime operator+(SimTime a, SimTime b) { return SimTime(a.s_ + b.s_); }

    friend SimTime operator-(SimTime a, SimTime b) {
        if (b.s_ > a.s_) {
            throw std::invalid_argument("SimTime: negative difference");
        }
        return SimTime(a.s_ - b.s_);
    }

    SimTime& operator+=(SimTime d) {
        s_ += d.sec();
        return *this;
    }

private:
    constexpr explicit SimTime(double s) : s_(s) {}
    double s_ = 0.0;
};

} // namespace qsim

#endif // QSIM_TIME_HPP
