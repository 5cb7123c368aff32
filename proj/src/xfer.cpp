#include "pdbuck/xfer.hpp"

namespace pdbuck {

RationalFunction buck_output_filter(const ConverterConfig& cfg) {
    cfg.validate();
    std::vector<double> num{1.0};
    if (cfg.Rc > 0.0) num.push_back(cfg.Rc * cfg.C);
    std::vector<double> den{1.0, cfg.L / cfg.R + cfg.Rc * cfg.C,
                            cfg.L * cfg.C * (1.0 + cfg.Rc / cfg.R)};
    return RationalFunction(std::move(num), std::move(den));
}

RationalFunction current_sense_tf(const ConverterConfig& cfg) {
    cfg.validate();
    if (cfg.mode != Mode::CurrentMode)
        throw ModeMismatch("current_sense_tf requires current mode");
    std::vector<double> num{cfg.Rs, cfg.Rs * cfg.C * (cfg.R + cfg.Rc)};
    std::vector<double> den{cfg.R, cfg.L + cfg.R * cfg.Rc * cfg.C,
                            cfg.L * cfg.C * (cfg.R + cfg.Rc)};
    return RationalFunction(std::move(num), std::move(den));
}

RationalFunction open_loop_tf(const ConverterConfig& cfg) {
    cfg.validate();
    RationalFunction loop = rf_mul(buck_output_filter(cfg), cfg.G2);
    if (cfg.mode == Mode::CurrentMode)
        loop = rf_sub(loop, current_sense_tf(cfg));
    return loop;
}

} // namespace pdbuck
