#pragma once

#include "doctest.h"
#include "generators.hpp"

namespace doctest {
template <>
struct StringMaker<ergokit::Scalar> {
    static String convert(const ergokit::Scalar& x) { return x.str().c_str(); }
};
template <>
struct StringMaker<ergokit::ExtMeasure> {
    static String convert(const ergokit::ExtMeasure& x) { return x.str().c_str(); }
};
}  // namespace doctest
