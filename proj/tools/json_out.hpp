// Tiny flat JSON emitter for CLI output. All floating-point values print with
// 12 significant digits so runs diff cleanly; non-finite values become
// null/"inf"/"-inf".
#pragma once

#include <cmath>
#include <cstdio>
#include <ostream>
#include <string>
#include <vector>

namespace graphens {

class JsonOut {
public:
    explicit JsonOut(std::ostream& os) : os_(os) { os_ << "{"; }

    void close() { os_ << "\n}\n"; }

    template <typename T>
    void field(const std::string& key, const T& v) {
        sep();
        os_ << quoted(key) << ": " << scalar(v);
    }

    void field(const std::string& key, const std::vector<double>& v) {
        sep();
        os_ << quoted(key) << ": [";
        for (std::size_t i = 0; i < v.size(); ++i) os_ << (i ? ", " : "") << scalar(v[i]);
        os_ << "]";
    }

    void field(const std::string& key, const std::vector<long long>& v) {
        sep();
        os_ << quoted(key) << ": [";
        for (std::size_t i = 0; i < v.size(); ++i) os_ << (i ? ", " : "") << scalar(v[i]);
        os_ << "]";
    }

    void field(const std::string& key, const std::vector<std::string>& v) {
        sep();
        os_ << quoted(key) << ": [";
        for (std::size_t i = 0; i < v.size(); ++i) os_ << (i ? ", " : "") << quoted(v[i]);
        os_ << "]";
    }

    void field(const std::string& key, const std::vector<std::vector<double>>& v) {
        sep();
        os_ << quoted(key) << ": [";
        for (std::size_t i = 0; i < v.size(); ++i) {
            os_ << (i ? ", " : "") << "[";
            for (std::size_t j = 0; j < v[i].size(); ++j)
                os_ << (j ? ", " : "") << scalar(v[i][j]);
            os_ << "]";
        }
        os_ << "]";
    }

private:
    static std::string scalar(double v) {
        if (std::isnan(v)) return "null";
        if (std::isinf(v)) return v > 0 ? "\"inf\"" : "\"-inf\"";
        char buf[40];
        std::snprintf(buf, sizeof buf, "%.12g", v);
        return buf;
    }
    static std::string scalar(bool v) { return v ? "true" : "false"; }
    static std::string scalar(int v) { return std::to_string(v); }
    static std::string scalar(long v) { return std::to_string(v); }
    static std::string scalar(long long v) { return std::to_string(v); }
    static std::string scalar(unsigned v) { return std::to_string(v); }
    static std::string scalar(unsigned long v) { return std::to_string(v); }
    static std::string scalar(unsigned long long v) { return std::to_string(v); }
    static std::string scalar(const char* v) { return quoted(v); }
    static std::string scalar(const std::string& v) { return quoted(v); }

    static std::string quoted(const std::string& v) {
        std::string out = "\"";
        for (char c : v) {
            if (c == '"' || c == '\\') out += '\\';
            out += c;
        }
        return out + "\"";
    }

    void sep() {
        os_ << (first_ ? "\n  " : ",\n  ");
        first_ = false;
    }

    std::ostream& os_;
    bool first_ = true;
};

} // namespace graphens
