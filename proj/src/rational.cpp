#include "ellgen/rational.hpp"

#include <cctype>

#include "ellgen/errors.hpp"

namespace ellgen {

std::string rat_to_string(const Rat& r) {
    if (r.get_den() == 1) return r.get_num().get_str();
    return r.get_num().get_str() + "/" + r.get_den().get_str();
}

static bool is_int_literal(const std::string& s) {
    size_t i = (!s.empty() && (s[0] == '-' || s[0] == '+')) ? 1 : 0;
    if (i >= s.size()) return false;
    for (; i < s.size(); ++i)
        if (!std::isdigit(static_cast<unsigned char>(s[i]))) return false;
    return true;
}

Rat rat_from_string(const std::string& raw) {
    std::string s;
    for (char ch : raw)
        if (!std::isspace(static_cast<unsigned char>(ch))) s += ch;
    auto slash = s.find('/');
    std::string p = s.substr(0, slash);
    std::string q = slash == std::string::npos ? "1" : s.substr(slash + 1);
    if (!is_int_literal(p) || !is_int_literal(q) || q[0] == '-' || q[0] == '+')
        throw ParseError("not a rational literal: \"" + raw + "\"");
    mpz_class num(p[0] == '+' ? p.substr(1) : p), den(q);
    if (den == 0) throw ParseError("zero denominator in \"" + raw + "\"");
    Rat r(num, den);
    r.canonicalize();
    return r;
}

bool rat_is_integer(const Rat& r) { return r.get_den() == 1; }

double rat_to_double(const Rat& r) { return r.get_d(); }

Rat factorial(int n) {
    mpz_class f = 1;
    for (int i = 2; i <= n; ++i) f *= i;
    return Rat(f);
}

}  // namespace ellgen
