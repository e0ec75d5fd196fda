#pragma once

// Deterministic splitmix64 generator. All randomness in the library flows
// through explicitly passed instances, so a run is a pure function of its
// seed regardless of platform or standard library.

#include "cremona/errors.hpp"

namespace cremona {

class Rng {
public:
    explicit Rng(u64 seed) : state_(seed) {}

    u64 next() {
        u64 z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    /// Uniform on [0, bound), bound >= 1. Rejection sampling keeps the
    /// distribution exact.
    u64 below(u64 bound) {
        if (bound == 0) throw error("Rng::below: bound must be positive");
        if (bound == 1) return 0;
        const u64 limit = ~u64{0} - ~u64{0} % bound;
        for (;;) {
            u64 x = next();
            if (x < limit) return x % bound;
        }
    }

    /// Independent child stream; advances this generator once.
    Rng fork() { return Rng(next() ^ 0xd1b54a32d192ed03ULL); }

private:
    u64 state_;
};

}  // namespace cremona
