#pragma once

#include <algorithm>
#include <cassert>
#include <cctype>
#include <cmath>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "honestrag/errors.hpp"

namespace honestrag {

struct EmbeddingVector {
    std::vector<double> values;

    std::size_t dimension() const { return values.size(); }

    bool is_zero() const {
        return std::all_of(values.begin(), values.end(), [](double v) { return v == 0.0; });
    }
};

/// Text embedding provider. Implementations must be deterministic per
/// provider version and safe for concurrent embed() calls.
class EmbeddingProvider {
public:
    virtual ~EmbeddingProvider() = default;
    virtual std::string name() const = 0;
    virtual std::size_t dimension() const = 0;
    virtual EmbeddingVector embed(std::string_view text) const = 0;
};

/// dot(a,b) / (|a|·|b|), clamped to [-1, 1]. Evaluated symmetrically:
/// swapping the arguments produces a bit-identical result.
inline double cosine_similarity(const EmbeddingVector& a, const EmbeddingVector& b) {
    if (a.dimension() != b.dimension()) {
        throw DimensionMismatch("cosine_similarity: dimensions " +
                                std::to_string(a.dimension()) + " vs " +
                                std::to_string(b.dimension()));
    }
    double dot = 0.0;
    double norm_a = 0.0;
    double norm_b = 0.0;
    for (std::size_t i = 0; i < a.values.size(); ++i) {
        dot += a.values[i] * b.values[i];
        norm_a += a.values[i] * a.values[i];
        norm_b += b.values[i] * b.values[i];
    }
    if (norm_a == 0.0 || norm_b == 0.0) throw ZeroVector("cosine_similarity: zero norm");
    const double value = dot / (std::sqrt(norm_a) * std::sqrt(norm_b));
    return std::clamp(value, -1.0, 1.0);
}

/// FNV-1a 64-bit over raw bytes.
inline std::uint64_t fnv1a64(std::string_view bytes) {
    std::uint64_t h = 14695981039346656037ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

/// Deterministic signed-feature-hashing embedding: tokens are maximal runs
/// of alphanumeric characters (bytes >= 0x80 count as token characters, so
/// multi-byte UTF-8 sequences stay whole), ASCII-lowercased, hashed with
/// FNV-1a 64; each token adds ±1 to bucket hash % dimension with the sign
/// taken from hash bit 8. The result is L2-normalized; an input with no
/// tokens yields the (unnormalized) zero vector.
inline EmbeddingVector hash_embed(std::string_view input, std::size_t dimension) {
    assert(dimension >= 2);
    EmbeddingVector vec;
    vec.values.assign(dimension, 0.0);
    const auto is_token_char = [](unsigned char c) {
        return c >= 0x80 || std::isalnum(c) != 0;
    };
    std::string token;
    const auto accumulate = [&] {
        if (token.empty()) return;
        const std::uint64_t h = fnv1a64(token);
        const double sign = ((h >> 8) & 1ULL) == 0 ? 1.0 : -1.0;
        vec.values[h % dimension] += sign;
        token.clear();
    };
    for (char raw : input) {
        const auto c = static_cast<unsigned char>(raw);
        if (is_token_char(c)) {
            token.push_back(static_cast<char>(std::tolower(c)));
        } else {
            accumulate();
        }
    }
    accumulate();
    double norm = 0.0;
    for (double v : vec.values) norm += v * v;
    if (norm > 0.0) {
        const double inv = 1.0 / std::sqrt(norm);
        for (double& v : vec.values) v *= inv;
    }
    return vec;
}

class HashEmbeddingProvider : public EmbeddingProvider {
public:
    explicit HashEmbeddingProvider(std::size_t dimension = 256) : dimension_(dimension) {}

    std::string name() const override {
        return "hash-embed-v1/" + std::to_string(dimension_);
    }
    std::size_t dimension() const override { return dimension_; }
    EmbeddingVector embed(std::string_view input) const override {
        return hash_embed(input, dimension_);
    }

private:
    std::size_t dimension_;
};

}  // namespace honestrag
