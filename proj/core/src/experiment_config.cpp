// SPDX-License-Identifier: Apache-2.0
#include "ssf/experiment_config.hpp"

#include <sstream>

namespace ssf {

std::string MethodSpec::name() const {
    struct Visitor {
        std::string operator()(const HooiSpec&) const { return "hooi"; }
        std::string operator()(const EofSpec&) const { return "eof"; }
        std::string operator()(const KsvdSpec&) const { return "ksvd"; }
        std::string operator()(const FourierEofSpec&) const { return "fourier_eof"; }
    };
    return std::visit(Visitor{}, spec);
}

std::string MethodSpec::label() const {
    std::ostringstream os;
    struct Visitor {
        std::ostringstream& os;
        void operator()(const HooiSpec& s) const {
            os << "hooi[" << s.l1 << "," << s.l2 << "," << s.l3 << "]";
        }
        void operator()(const EofSpec& s) const { os << "eof[" << s.k << "]"; }
        void operator()(const KsvdSpec& s) const { os << "ksvd[" << s.z << "," << s.t << "]"; }
        void operator()(const FourierEofSpec& s) const {
            os << "fourier_eof[" << s.nf1 << "," << s.nf2 << "," << s.kf << "]";
        }
    };
    std::visit(Visitor{os}, spec);
    return os.str();
}

std::vector<MethodSpec> ExperimentConfig::default_methods() {
    return {
        MethodSpec{HooiSpec{8, 8, 10}},
        MethodSpec{EofSpec{2}},
        MethodSpec{KsvdSpec{320, 2, 15}},
        MethodSpec{FourierEofSpec{8, 8, 10, std::nullopt, std::nullopt}},
    };
}

}  // namespace ssf
