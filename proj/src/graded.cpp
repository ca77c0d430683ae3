#include "ellgen/graded.hpp"

#include <cctype>

namespace ellgen {

int GenTable::index(const std::string& name) const {
    for (size_t i = 0; i < names.size(); ++i)
        if (names[i] == name) return static_cast<int>(i);
    return -1;
}

GenTablePtr make_table(std::vector<std::string> names, std::vector<int> degrees) {
    auto t = std::make_shared<GenTable>();
    if (degrees.empty()) degrees.assign(names.size(), 2);
    t->names = std::move(names);
    t->degrees = std::move(degrees);
    return t;
}

int mono_degree(const GenTable& t, const Mono& m) {
    int d = 0;
    for (size_t i = 0; i < m.size(); ++i) d += m[i] * t.degrees[i];
    return d;
}

std::string mono_to_string(const GenTable& t, const Mono& m) {
    std::string s;
    for (size_t i = 0; i < m.size(); ++i) {
        if (m[i] == 0) continue;
        if (!s.empty()) s += "*";
        s += t.names[i];
        if (m[i] > 1) s += "^" + std::to_string(m[i]);
    }
    return s.empty() ? "1" : s;
}

static std::string strip(const std::string& s) {
    size_t a = 0, b = s.size();
    while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
    while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
    return s.substr(a, b - a);
}

Mono mono_from_string(const GenTable& t, const std::string& raw) {
    Mono m(t.size(), 0);
    std::string s = strip(raw);
    if (s == "1") return m;
    size_t pos = 0;
    while (pos <= s.size()) {
        size_t star = s.find('*', pos);
        std::string factor = strip(s.substr(pos, star == std::string::npos ? std::string::npos : star - pos));
        std::string name = factor;
        int power = 1;
        if (auto caret = factor.find('^'); caret != std::string::npos) {
            name = strip(factor.substr(0, caret));
            std::string p = strip(factor.substr(caret + 1));
            if (p.empty() || p.find_first_not_of("0123456789") != std::string::npos)
                throw ParseError("bad exponent in monomial \"" + raw + "\"");
            power = std::stoi(p);
        }
        int i = t.index(name);
        if (i < 0) throw ParseError("unknown generator \"" + name + "\" in monomial \"" + raw + "\"");
        m[i] += power;
        if (star == std::string::npos) break;
        pos = star + 1;
    }
    return m;
}

}  // namespace ellgen
