#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace ipa {

// ---------------------------------------------------------------------------
// Errors
// ---------------------------------------------------------------------------

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct TransportError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ProtocolError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct SequencingError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct DegenerateInputError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct IngestError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------------------
// Digests (SHA-256 hex)
// ---------------------------------------------------------------------------

std::string sha256_hex(std::string_view bytes);
std::string sha256_hex(const std::vector<unsigned char>& bytes);

// Short 16-hex-char form used for record ids and ledger line suffixes.
std::string digest16(std::string_view bytes);

// ---------------------------------------------------------------------------
// Deterministic RNG
//
// mt19937_64 output is fully specified by the standard; the distribution
// helpers below avoid std::uniform_*_distribution, whose mapping is
// implementation-defined. Tests reimplement these mappings as independent
// oracles, so the exact constructions are part of the contract:
//   uniform01(g)        = (g() >> 11) * 2^-53
//   below(g, n)         = g() % n
//   normal via Box-Muller on two uniform01 draws
// ---------------------------------------------------------------------------

class Rng {
public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}

    std::uint64_t next() { return gen_(); }

    double uniform01() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

    std::uint64_t below(std::uint64_t n) { return n == 0 ? 0 : gen_() % n; }

    double uniform_range(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

    std::int64_t int_range(std::int64_t lo, std::int64_t hi) {  // inclusive
        return lo + static_cast<std::int64_t>(below(static_cast<std::uint64_t>(hi - lo + 1)));
    }

    double normal(double mean, double sigma);

    template <typename T>
    void shuffle(std::vector<T>& v) {
        for (std::size_t i = v.size(); i > 1; --i) {
            std::size_t j = static_cast<std::size_t>(below(i));
            std::swap(v[i - 1], v[j]);
        }
    }

private:
    std::mt19937_64 gen_;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

// Derives a child seed from a run seed and a string key (sample id, stage
// name). Order-independent: per-sample randomness never depends on worker
// interleaving.
std::uint64_t derive_seed(std::uint64_t base, std::string_view key);

// ---------------------------------------------------------------------------
// Strings
// ---------------------------------------------------------------------------

std::string trim(std::string_view s);

// Case-folded, whitespace-collapsed form used for candidate dedup.
std::string normalize_text(std::string_view s);

// Whitespace-token count (the engine's definition of "words").
int word_count(std::string_view s);

std::string to_lower(std::string_view s);

std::vector<std::string> split_lines(std::string_view s);

std::string base64_encode(const std::vector<unsigned char>& bytes);

// ---------------------------------------------------------------------------
// Small logging surface (stderr)
// ---------------------------------------------------------------------------

enum class LogLevel { debug = 0, info = 1, warn = 2, error = 3 };

void set_log_level(LogLevel level);
void log_msg(LogLevel level, const std::string& msg);

inline void log_debug(const std::string& m) { log_msg(LogLevel::debug, m); }
inline void log_info(const std::string& m) { log_msg(LogLevel::info, m); }
inline void log_warn(const std::string& m) { log_msg(LogLevel::warn, m); }
inline void log_error(const std::string& m) { log_msg(LogLevel::error, m); }

// ---------------------------------------------------------------------------
// Filesystem helpers
// ---------------------------------------------------------------------------

std::string read_file(const std::string& path);
std::optional<std::string> read_file_if_exists(const std::string& path);

// Writes via temp file + rename so readers never observe a torn file.
void write_file_atomic(const std::string& path, std::string_view content);

}  // namespace ipa
