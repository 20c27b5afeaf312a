#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace mandeldecor {

// Flat "key = value" text. '#' starts a comment line. Insertion order is kept so that
// writing the same content twice yields the same bytes.
class KeyValueFile {
public:
    static KeyValueFile parse(const std::string& text);
    static KeyValueFile load(const std::string& path);

    void set(const std::string& key, const std::string& value);
    std::optional<std::string> get(const std::string& key) const;
    std::string require(const std::string& key) const;
    bool has(const std::string& key) const { return get(key).has_value(); }
    void add_comment(const std::string& line) { comments_.push_back(line); }

    const std::vector<std::pair<std::string, std::string>>& entries() const { return entries_; }

    std::string to_string() const;
    void save(const std::string& path) const;

private:
    std::vector<std::string> comments_;
    std::vector<std::pair<std::string, std::string>> entries_;
};

}  // namespace mandeldecor
