#pragma once

#include <lpgeom/space.hpp>
#include <lpgeom/sets.hpp>
#include <lpgeom/project.hpp>
#include <lpgeom/cones.hpp>
#include <lpgeom/faces.hpp>
