#include "structlim/rational.hpp"

namespace structlim {

std::string rational_to_string(const Rational& q) {
    Rational c = q;
    c.canonicalize();
    if (c.get_den() == 1) return c.get_num().get_str();
    return c.get_num().get_str() + "/" + c.get_den().get_str();
}

Rational rational_from_string(const std::string& text) {
    if (text.empty()) throw validation_error("empty rational literal");
    auto slash = text.find('/');
    try {
        if (slash == std::string::npos) {
            auto dot = text.find('.');
            if (dot != std::string::npos) {
                // Decimal literal: scale by a power of ten.
                std::string digits = text.substr(0, dot) + text.substr(dot + 1);
                Integer num(digits, 10);
                Integer den = 1;
                for (std::size_t i = dot + 1; i < text.size(); ++i) den *= 10;
                Rational q(num, den);
                q.canonicalize();
                return q;
            }
            Rational q(Integer(text, 10));
            return q;
        }
        Integer num(text.substr(0, slash), 10);
        Integer den(text.substr(slash + 1), 10);
        if (den == 0) throw validation_error("zero denominator in \"" + text + "\"");
        Rational q(num, den);
        q.canonicalize();
        return q;
    } catch (const std::invalid_argument&) {
        throw validation_error("malformed rational \"" + text + "\"");
    }
}

double rational_to_double(const Rational& q) { return q.get_d(); }

Integer integer_pow(unsigned long base, unsigned long exp) {
    Integer r;
    mpz_ui_pow_ui(r.get_mpz_t(), base, exp);
    return r;
}

} // namespace structlim
