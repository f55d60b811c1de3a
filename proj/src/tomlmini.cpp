#include "eds/tomlmini.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>

namespace eds::toml {

const Value& Table::at(const std::string& key) const {
    auto it = kv_.find(key);
    if (it == kv_.end()) throw std::out_of_range("missing key '" + key + "'");
    return it->second;
}

std::string Table::get_string(const std::string& key) const {
    const Value& v = at(key);
    if (v.kind != Value::Kind::String) throw std::out_of_range("key '" + key + "' is not a string");
    return v.s;
}

double Table::get_number(const std::string& key) const {
    const Value& v = at(key);
    if (v.kind != Value::Kind::Number) throw std::out_of_range("key '" + key + "' is not a number");
    return v.num;
}

std::vector<double> Table::get_number_array(const std::string& key) const {
    const Value& v = at(key);
    if (v.kind != Value::Kind::NumberArray)
        throw std::out_of_range("key '" + key + "' is not a number array");
    return v.nums;
}

std::string Table::get_string_or(const std::string& key, const std::string& dflt) const {
    return has(key) ? get_string(key) : dflt;
}

double Table::get_number_or(const std::string& key, double dflt) const {
    return has(key) ? get_number(key) : dflt;
}

std::vector<std::string> Table::children(const std::string& prefix) const {
    const std::string pre = prefix.empty() ? "" : prefix + ".";
    std::vector<std::string> out;
    for (const auto& [k, v] : kv_) {
        if (k.rfind(pre, 0) != 0) continue;
        std::string rest = k.substr(pre.size());
        const size_t dot = rest.find('.');
        if (dot != std::string::npos) rest = rest.substr(0, dot);
        if (std::find(out.begin(), out.end(), rest) == out.end()) out.push_back(rest);
    }
    return out;
}

namespace {

struct Cursor {
    const std::string& text;
    size_t pos = 0;
    int line = 1;
};

void skip_ws(Cursor& c) {
    while (c.pos < c.text.size() && (c.text[c.pos] == ' ' || c.text[c.pos] == '\t')) ++c.pos;
}

bool ident_char(char ch) {
    return std::isalnum(static_cast<unsigned char>(ch)) || ch == '_' || ch == '-';
}

std::string read_key(Cursor& c) {
    skip_ws(c);
    size_t start = c.pos;
    while (c.pos < c.text.size() && (ident_char(c.text[c.pos]) || c.text[c.pos] == '.')) ++c.pos;
    if (c.pos == start) throw ParseError("expected a key", c.line);
    return c.text.substr(start, c.pos - start);
}

std::string read_quoted(Cursor& c) {
    ++c.pos; // opening quote
    std::string out;
    while (c.pos < c.text.size() && c.text[c.pos] != '"') {
        if (c.text[c.pos] == '\n') throw ParseError("unterminated string", c.line);
        if (c.text[c.pos] == '\\' && c.pos + 1 < c.text.size()) {
            ++c.pos;
            const char e = c.text[c.pos];
            out += (e == 'n') ? '\n' : (e == 't') ? '\t' : e;
        } else {
            out += c.text[c.pos];
        }
        ++c.pos;
    }
    if (c.pos >= c.text.size()) throw ParseError("unterminated string", c.line);
    ++c.pos; // closing quote
    return out;
}

double read_number(Cursor& c) {
    size_t start = c.pos;
    while (c.pos < c.text.size() &&
           (std::isdigit(static_cast<unsigned char>(c.text[c.pos])) || c.text[c.pos] == '+' ||
            c.text[c.pos] == '-' || c.text[c.pos] == '.' || c.text[c.pos] == 'e' ||
            c.text[c.pos] == 'E' || c.text[c.pos] == '_'))
        ++c.pos;
    std::string tok = c.text.substr(start, c.pos - start);
    tok.erase(std::remove(tok.begin(), tok.end(), '_'), tok.end());
    try {
        size_t used = 0;
        const double v = std::stod(tok, &used);
        if (used != tok.size()) throw std::invalid_argument(tok);
        return v;
    } catch (const std::exception&) {
        throw ParseError("bad number '" + tok + "'", c.line);
    }
}

Value read_value(Cursor& c) {
    skip_ws(c);
    if (c.pos >= c.text.size()) throw ParseError("expected a value", c.line);
    Value v;
    const char ch = c.text[c.pos];
    if (ch == '"') {
        v.kind = Value::Kind::String;
        v.s = read_quoted(c);
        return v;
    }
    if (ch == '[') {
        ++c.pos;
        bool str_array = false, num_array = false;
        while (true) {
            skip_ws(c);
            if (c.pos < c.text.size() && c.text[c.pos] == '\n') {
                ++c.line;
                ++c.pos;
                continue;
            }
            if (c.pos >= c.text.size()) throw ParseError("unterminated array", c.line);
            if (c.text[c.pos] == ']') {
                ++c.pos;
                break;
            }
            if (c.text[c.pos] == ',') {
                ++c.pos;
                continue;
            }
            if (c.text[c.pos] == '"') {
                if (num_array) throw ParseError("mixed array element types", c.line);
                str_array = true;
                v.strs.push_back(read_quoted(c));
            } else {
                if (str_array) throw ParseError("mixed array element types", c.line);
                num_array = true;
                v.nums.push_back(read_number(c));
            }
        }
        v.kind = str_array ? Value::Kind::StringArray : Value::Kind::NumberArray;
        return v;
    }
    if (c.text.compare(c.pos, 4, "true") == 0 && (c.pos + 4 >= c.text.size() ||
                                                  !ident_char(c.text[c.pos + 4]))) {
        c.pos += 4;
        v.kind = Value::Kind::Bool;
        v.b = true;
        return v;
    }
    if (c.text.compare(c.pos, 5, "false") == 0 &&
        (c.pos + 5 >= c.text.size() || !ident_char(c.text[c.pos + 5]))) {
        c.pos += 5;
        v.kind = Value::Kind::Bool;
        v.b = false;
        return v;
    }
    v.kind = Value::Kind::Number;
    v.num = read_number(c);
    return v;
}

} // namespace

Table parse(const std::string& text) {
    Table t;
    Cursor c{text};
    std::string section;
    while (c.pos < c.text.size()) {
        skip_ws(c);
        if (c.pos >= c.text.size()) break;
        const char ch = c.text[c.pos];
        if (ch == '\n') {
            ++c.line;
            ++c.pos;
            continue;
        }
        if (ch == '#') {
            while (c.pos < c.text.size() && c.text[c.pos] != '\n') ++c.pos;
            continue;
        }
        if (ch == '[') {
            ++c.pos;
            section = read_key(c);
            skip_ws(c);
            if (c.pos >= c.text.size() || c.text[c.pos] != ']')
                throw ParseError("expected ']' after section name", c.line);
            ++c.pos;
        } else {
            const std::string key = read_key(c);
            skip_ws(c);
            if (c.pos >= c.text.size() || c.text[c.pos] != '=')
                throw ParseError("expected '=' after key '" + key + "'", c.line);
            ++c.pos;
            Value v = read_value(c);
            t.set(section.empty() ? key : section + "." + key, std::move(v));
        }
        skip_ws(c);
        if (c.pos < c.text.size() && c.text[c.pos] == '#')
            while (c.pos < c.text.size() && c.text[c.pos] != '\n') ++c.pos;
        if (c.pos < c.text.size()) {
            if (c.text[c.pos] != '\n') throw ParseError("trailing characters", c.line);
            ++c.line;
            ++c.pos;
        }
    }
    return t;
}

Table parse_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse(ss.str());
}

} // namespace eds::toml
