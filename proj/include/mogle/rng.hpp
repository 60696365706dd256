#pragma once

#include <cstdint>
#include <random>

namespace mogle {

// splitmix64; used to derive independent sub-seeds from the run seed so that
// per-sample / per-module streams never alias.
inline uint64_t splitmix64(uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// Domain tags keep derived streams disjoint even for equal indices.
namespace seed_domain {
constexpr uint64_t kData = 0x64617461ULL;      // dataset samples
constexpr uint64_t kCodec = 0x636f6465ULL;     // patch codec projection
constexpr uint64_t kModel = 0x6d6f646cULL;     // parameter init
constexpr uint64_t kTrain = 0x7472616eULL;     // training-time draws
constexpr uint64_t kSample = 0x73616d70ULL;    // sampling noise
constexpr uint64_t kFeature = 0x66656174ULL;   // metric feature extractor
}  // namespace seed_domain

inline uint64_t derive_seed(uint64_t root, uint64_t domain, uint64_t index = 0) {
    return splitmix64(root ^ splitmix64(domain) ^ (0x517cc1b727220a95ULL * index));
}

// All randomness in the project flows through this wrapper.
class Rng {
  public:
    explicit Rng(uint64_t seed) : engine_(seed) {}

    float normal(float mean = 0.0f, float stddev = 1.0f) {
        std::normal_distribution<float> d(mean, stddev);
        return d(engine_);
    }
    float uniform(float lo = 0.0f, float hi = 1.0f) {
        std::uniform_real_distribution<float> d(lo, hi);
        return d(engine_);
    }
    // inclusive bounds
    int uniform_int(int lo, int hi) {
        std::uniform_int_distribution<int> d(lo, hi);
        return d(engine_);
    }
    bool bernoulli(double p) {
        std::bernoulli_distribution d(p);
        return d(engine_);
    }
    std::mt19937_64& engine() { return engine_; }

  private:
    std::mt19937_64 engine_;
};

}  // namespace mogle
