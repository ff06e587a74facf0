#pragma once

#include <shadelab/annotation_json.hpp>
#include <shadelab/annotations.hpp>
#include <shadelab/classify.hpp>
#include <shadelab/error.hpp>
#include <shadelab/eval.hpp>
#include <shadelab/filters.hpp>
#include <shadelab/image.hpp>
#include <shadelab/image_io.hpp>
#include <shadelab/labelgen.hpp>
#include <shadelab/retinex.hpp>
