#include <cmath>
#include <random>
#include <vector>

#include "dfclab/control.hpp"
#include "doctest.h"

using namespace dfclab;
using namespace dfclab::control;

TEST_CASE("pid_step: null response") {
    PidConfig cfg;
    PidState s;
    const auto [out, next] = pid_step(cfg, s, 21.0, 21.0, 600.0);
    CHECK(out.n_set == 0.0);
    CHECK(next.integral == 0.0);
}

TEST_CASE("pid_step: saturation clamps and freezes the integral") {
    PidConfig cfg;
    PidState s;
    auto [out, next] = pid_step(cfg, s, 21.0, 5.0, 600.0);
    CHECK(out.n_set == 1.0);
    const double frozen = next.integral;
    auto [out2, next2] = pid_step(cfg, next, 21.0, 5.0, 600.0);
    CHECK(out2.n_set == 1.0);
    CHECK(next2.integral == frozen); // anti-windup: no growth while saturated
    CHECK(cfg.ki * next2.integral <= 1.0);
    CHECK(cfg.ki * next2.integral >= -1.0);
}

TEST_CASE("pid_step: pure proportional when ki = kd = 0") {
    PidConfig cfg;
    cfg.kp = 0.4;
    cfg.ki = 0.0;
    cfg.kd = 0.0;
    PidState s;
    for (double measured : {24.0, 21.5, 21.0, 20.7, 19.8, 11.0}) {
        const auto [out, next] = pid_step(cfg, s, 21.0, measured, 600.0);
        CHECK(out.n_set == std::clamp(0.4 * (21.0 - measured), 0.0, 1.0));
        s = next;
    }
}

namespace {

// Reference implementation used as the oracle: same published semantics,
// written straight from the difference equations.
double reference_pid(double kp, double ki, double kd, double setpoint, double measured,
                     double dt, double& integral, double& prev_err, bool& primed) {
    const double e = setpoint - measured;
    double i_cand = integral + e * dt;
    if (ki > 0.0) {
        const double bound = 1.0 / ki;
        if (i_cand > bound) i_cand = bound;
        if (i_cand < -bound) i_cand = -bound;
    }
    const double d = primed ? (e - prev_err) / dt : 0.0;
    const double raw = kp * e + ki * i_cand + kd * d;
    double u = raw;
    if (u < 0.0) u = 0.0;
    if (u > 1.0) u = 1.0;
    if (raw == u) integral = i_cand;
    prev_err = e;
    primed = true;
    return u;
}

} // namespace

TEST_CASE("pid_step: tracks a unit setpoint step on a first-order plant, matching the oracle") {
    // Plant: tau * dT/dt = -(T - T_amb) + g * u, discretized explicitly.
    const double tau = 1800.0, g = 4.0, t_amb = 18.0, dt = 60.0;
    PidConfig cfg; // default frozen gains

    PidState state;
    double t_mine = t_amb, t_ref = t_amb;
    double ref_integral = 0.0, ref_prev = 0.0;
    bool ref_primed = false;

    double final_error = 1.0;
    for (int k = 0; k < 600; ++k) {
        const auto [mine, next] = pid_step(cfg, state, t_amb + 1.0, t_mine, dt);
        state = next;
        const double oracle = reference_pid(cfg.kp, cfg.ki, cfg.kd, t_amb + 1.0, t_ref, dt,
                                            ref_integral, ref_prev, ref_primed);
        CHECK(mine.n_set == doctest::Approx(oracle).epsilon(1e-12));

        t_mine += dt * (-(t_mine - t_amb) + g * mine.n_set) / tau;
        t_ref += dt * (-(t_ref - t_amb) + g * oracle) / tau;
        final_error = std::abs(t_mine - (t_amb + 1.0));
    }
    CHECK(final_error < 0.1); // settled within the tenth-degree band
}

TEST_CASE("rc2_step follows the 0.05 increment rule") {
    CHECK(rc2_step(ControlState{0.10}, 20.0, 21.0, 0.5).n_set == doctest::Approx(0.15));
    CHECK(rc2_step(ControlState{1.0}, 20.0, 21.0, 0.5).n_set == 1.0);             // clamp
    CHECK(rc2_step(ControlState{0.30}, 21.8, 21.0, 0.5).n_set == doctest::Approx(0.25));
    CHECK(rc2_step(ControlState{0.30}, 21.2, 21.0, 0.5).n_set == 0.30); // hold region
    CHECK(rc2_step(ControlState{0.02}, 25.0, 21.0, 0.5).n_set == 0.0);  // clamp at zero
}

TEST_CASE("rc2_step: per-step change is one of {-0.05, 0, +0.05} before clamping") {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> n(0.0, 1.0), t(15.0, 27.0);
    for (int i = 0; i < 500; ++i) {
        const double cur = n(rng);
        const double out = rc2_step(ControlState{cur}, t(rng), 21.0, 0.5).n_set;
        const double change = out - cur;
        const bool stepped = std::abs(change) < 1e-12 ||
                             std::abs(std::abs(change) - 0.05) < 1e-12 ||
                             out == 0.0 || out == 1.0; // clamped remainder
        CHECK(stepped);
        CHECK(out >= 0.0);
        CHECK(out <= 1.0);
    }
}

TEST_CASE("comfort_violated: closed band semantics") {
    ComfortSchedule sched;
    const std::vector<double> tod{8 * 3600.0, 12 * 3600.0, 22 * 3600.0};

    SUBCASE("all on setpoint") {
        const std::vector<double> temps{21.0, 21.0, 19.0};
        CHECK_FALSE(comfort_violated(temps, tod, sched));
    }
    SUBCASE("one just below the band") {
        const std::vector<double> temps{21.0, 21.0 - 0.5 - 0.01, 19.0};
        CHECK(comfort_violated(temps, tod, sched));
    }
    SUBCASE("exact band edges do not violate") {
        const std::vector<double> temps{21.5, 20.5, 18.5};
        CHECK_FALSE(comfort_violated(temps, tod, sched));
    }
    SUBCASE("upper breach counts too") {
        const std::vector<double> temps{21.0, 21.51, 19.0};
        CHECK(comfort_violated(temps, tod, sched));
    }
    SUBCASE("length mismatch") {
        const std::vector<double> temps{21.0};
        CHECK_THROWS_AS(comfort_violated(temps, tod, sched), ValidationError);
    }
}
