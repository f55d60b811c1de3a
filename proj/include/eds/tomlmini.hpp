#pragma once

#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace eds::toml {

struct ParseError : std::runtime_error {
    int line;
    ParseError(const std::string& msg, int l)
        : std::runtime_error("line " + std::to_string(l) + ": " + msg), line(l) {}
};

struct Value {
    enum class Kind { String, Number, Bool, NumberArray, StringArray };
    Kind kind = Kind::Number;
    std::string s;
    double num = 0;
    bool b = false;
    std::vector<double> nums;
    std::vector<std::string> strs;
};

// flat view of the document: keys are dotted paths, section headers prefix
// the keys that follow them
class Table {
public:
    bool has(const std::string& key) const { return kv_.count(key) != 0; }
    const Value& at(const std::string& key) const;
    std::string get_string(const std::string& key) const;
    double get_number(const std::string& key) const;
    std::vector<double> get_number_array(const std::string& key) const;
    std::string get_string_or(const std::string& key, const std::string& dflt) const;
    double get_number_or(const std::string& key, double dflt) const;
    // immediate child names under a section prefix, deduplicated, in order
    std::vector<std::string> children(const std::string& prefix) const;
    void set(const std::string& key, Value v) { kv_[key] = std::move(v); }

private:
    std::map<std::string, Value> kv_;
};

// subset: `key = value` lines, [section] and [dotted.section] headers,
// comments with #, double-quoted strings, numbers, true/false, flat arrays
// of numbers or strings
Table parse(const std::string& text);
Table parse_file(const std::string& path);

} // namespace eds::toml
