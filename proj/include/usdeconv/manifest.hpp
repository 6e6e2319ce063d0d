#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace usdeconv {

/// Ordered flat `key = value` store used for run manifests and config files.
/// UTF-8 text, one pair per line, '#' starts a comment. Keys keep insertion
/// order so manifests diff cleanly.
class Manifest {
public:
    static Manifest load(const std::string& path);
    static Manifest parse(const std::string& text);

    void set(const std::string& key, const std::string& value);
    void set(const std::string& key, double value);
    void set(const std::string& key, std::int64_t value);
    void set(const std::string& key, std::uint64_t value);
    void set(const std::string& key, bool value);

    bool has(const std::string& key) const;
    const std::string& get(const std::string& key) const;
    std::string get_or(const std::string& key, const std::string& fallback) const;
    double get_double(const std::string& key) const;
    std::int64_t get_int(const std::string& key) const;
    bool get_bool(const std::string& key) const;

    void save(const std::string& path) const;
    std::string to_string() const;
    const std::vector<std::pair<std::string, std::string>>& entries() const { return entries_; }

private:
    std::vector<std::pair<std::string, std::string>> entries_;
};

} // namespace usdeconv
