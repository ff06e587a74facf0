/**
 * @file filters.hpp
 * @brief Gradient, window and morphology primitives over ScalarField / BinaryMask.
 *
 * Window operations clip at the image border; no values are invented outside
 * the image. Erosion is the exception: out-of-bounds neighbors count as false,
 * so true regions shrink at the border.
 */
#pragma once

#include <shadelab/image.hpp>

#include <utility>

namespace shadelab {

/// Per-pixel L2 norm of the forward-difference gradient. The last column and
/// last row use the backward difference so the output keeps the input size.
/// Throws InvalidArgument for fields narrower or shorter than 2 pixels.
ScalarField gradient_magnitude(const ScalarField& f);

/// Same stencil as gradient_magnitude, returning the raw (dx, dy) fields.
std::pair<ScalarField, ScalarField> forward_gradient(const ScalarField& f);

/// Sliding size x size maximum. For even sizes the window spans
/// [-(size-1)/2, size/2] so the extra row/column sits toward +x/+y.
ScalarField max_filter(const ScalarField& f, int size);

/// `iterations` rounds of erosion with the 3x3 all-ones element.
BinaryMask binary_erosion(const BinaryMask& m, int iterations);

/// True iff any true pixel lies in the centered window x window neighborhood.
/// `window` must be odd.
BinaryMask binary_dilation(const BinaryMask& m, int window);

/// Output size after scaling (width, height) so that the larger side equals
/// max_dim. Sizes already within the bound are returned unchanged.
std::pair<int, int> fit_max_dim(int width, int height, int max_dim);

/// Bilinear downscale so that max(width, height) <= max_dim, aspect preserved.
LinearImage resize_max_dim(const LinearImage& img, int max_dim);

/// Bilinear resampling to an explicit size (pixel-center aligned, edge clamped).
LinearImage resize_bilinear(const LinearImage& img, int width, int height);
ScalarField resize_bilinear(const ScalarField& f, int width, int height);

/// Nearest-neighbor resampling; used for masks so no fractional values appear.
BinaryMask resize_nearest(const BinaryMask& m, int width, int height);

}  // namespace shadelab
