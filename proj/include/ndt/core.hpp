#pragma once

#include "ndt/rational.hpp"

#include <stdexcept>
#include <string>
#include <vector>

namespace ndt {

enum class ErrorKind {
    InvalidConfig,
    Domain,
    Parse,
    MissingEndpoint,
    DegenerateChannel,
    TooManyRedraws,
    ShapeMismatch,
    UnsupportedScheme,
};

const char* to_string(ErrorKind k);

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, std::string field, const std::string& what)
        : std::runtime_error(what), kind_(kind), field_(std::move(field)) {}
    ErrorKind kind() const { return kind_; }
    const std::string& field() const { return field_; }

private:
    ErrorKind kind_;
    std::string field_;
};

struct NetworkConfig {
    int M = 1; // relays
    int K = 1; // users
    int N = 2; // library size
    Rational mu;

    // mu * M when that is an integer, -1 otherwise
    int cached_count() const;
};

enum class SchemeLabel { Unicast, FullZF, OneShot, IA31, IA22, Envelope };
const char* to_string(SchemeLabel s);

struct SchemePoint {
    Rational mu;
    Rational ndt;
    SchemeLabel scheme_label = SchemeLabel::OneShot;
};

BigInt binomial(long n, long k);
NetworkConfig validate_config(const NetworkConfig& cfg);
std::vector<Rational> discrete_cache_grid(int M);

// Convenience: build and validate, N defaults to K+M.
NetworkConfig make_config(int K, int M, const Rational& mu, int N = 0);

} // namespace ndt
