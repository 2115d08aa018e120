#pragma once

#include <cmath>
#include <utility>

#include "errors.hpp"
#include "spinors.hpp"

namespace diracgh {

// Dense complex 4x4 solve by Gaussian elimination with partial pivoting.
// Small enough that a library dependency is not worth it.
inline Vec4 solve4(Mat4 A, Vec4 b) {
    for (int col = 0; col < 4; ++col) {
        int piv = col;
        double best = std::abs(A[col][col]);
        for (int r = col + 1; r < 4; ++r) {
            const double cand = std::abs(A[r][col]);
            if (cand > best) {
                best = cand;
                piv = r;
            }
        }
        if (!(best > 0.0)) throw engine_error("singular matching system");
        if (piv != col) {
            std::swap(A[piv], A[col]);
            std::swap(b[piv], b[col]);
        }
        for (int r = col + 1; r < 4; ++r) {
            const cplx f = A[r][col] / A[col][col];
            if (f == cplx(0)) continue;
            for (int c = col; c < 4; ++c) A[r][c] -= f * A[col][c];
            b[r] -= f * b[col];
        }
    }
    Vec4 x{};
    for (int row = 3; row >= 0; --row) {
        cplx acc = b[row];
        for (int c = row + 1; c < 4; ++c) acc -= A[row][c] * x[c];
        x[row] = acc / A[row][row];
    }
    return x;
}

} // namespace diracgh
