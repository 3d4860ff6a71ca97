#pragma once

namespace pbg
{
    // SI values (CODATA 2018). Only tests should construct non-default instances.
    struct PhysicalConstants
    {
        double hbar = 1.054571817e-34;     // J s
        double epsilon0 = 8.8541878128e-12; // F/m
        double c = 299792458.0;            // m/s
        double e_charge = 1.602176634e-19; // C

        void Validate() const;
    };

} // namespace pbg
