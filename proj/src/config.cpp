#include "pdbuck/config.hpp"

#include "pdbuck/errors.hpp"

namespace pdbuck {

RampSpec RampSpec::fixed(double Vl, double Vh) {
    if (Vl == Vh) throw InvalidConfig("fixed ramp requires Vh != Vl");
    RampSpec r;
    r.kind = Kind::Fixed;
    r.Vl = Vl;
    r.Vh = Vh;
    return r;
}

RampSpec RampSpec::feedforward(double kl, double kh) {
    if (kl == kh) throw InvalidConfig("feedforward ramp requires kh != kl");
    RampSpec r;
    r.kind = Kind::Feedforward;
    r.kl = kl;
    r.kh = kh;
    return r;
}

void ConverterConfig::validate() const {
    if (!(L > 0.0)) throw InvalidConfig("L must be > 0");
    if (!(C > 0.0)) throw InvalidConfig("C must be > 0");
    if (!(R > 0.0)) throw InvalidConfig("R must be > 0");
    if (!(Rc >= 0.0)) throw InvalidConfig("Rc must be >= 0");
    if (!(T > 0.0)) throw InvalidConfig("T must be > 0");
    if (mode == Mode::CurrentMode && !(Rs > 0.0))
        throw InvalidConfig("Rs must be > 0 in current mode");
    if (!std::isfinite(Vr) || !std::isfinite(g))
        throw InvalidConfig("Vr and g must be finite");
    if (ramp.kind == RampSpec::Kind::Fixed) {
        if (ramp.Vl == ramp.Vh) throw InvalidConfig("fixed ramp requires Vh != Vl");
    } else {
        if (ramp.kl == ramp.kh)
            throw InvalidConfig("feedforward ramp requires kh != kl");
    }
}

} // namespace pdbuck
