//! Occupancy grid and furniture obstacle injection.

use crate::geometry::Point2;
use crate::semantic_map::SemanticMap;
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub const DEFAULT_RESOLUTION: f64 = 0.05;

#[derive(Debug, Error, PartialEq)]
pub enum GridError {
    #[error("resolution must be positive and finite, got {0}")]
    Resolution(f64),
    #[error("grid must be at least 1x1, got {0}x{1}")]
    Size(usize, usize),
    #[error("cell buffer holds {got} flags, expected {expected}")]
    CellCount { expected: usize, got: usize },
}

/// Row-major occupancy flags; row `j` spans `y ∈ [origin.y + j·res, origin.y + (j+1)·res)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OccupancyGrid {
    origin: Point2,
    resolution: f64,
    width: usize,
    height: usize,
    cells: Vec<bool>,
}

impl OccupancyGrid {
    pub fn new(
        origin: Point2,
        resolution: f64,
        width: usize,
        height: usize,
    ) -> Result<Self, GridError> {
        Self::from_cells(origin, resolution, width, height, vec![false; width * height])
    }

    pub fn from_cells(
        origin: Point2,
        resolution: f64,
        width: usize,
        height: usize,
        cells: Vec<bool>,
    ) -> Result<Self, GridError> {
        if !(resolution > 0.0 && resolution.is_finite()) {
            return Err(GridError::Resolution(resolution));
        }
        if width == 0 || height == 0 {
            return Err(GridError::Size(width, height));
        }
        if cells.len() != width * height {
            return Err(GridError::CellCount {
                expected: width * height,
                got: cells.len(),
            });
        }
        Ok(Self {
            origin,
            resolution,
            width,
            height,
            cells,
        })
    }

    /// Smallest grid covering the map's contours.
    pub fn covering(map: &SemanticMap, resolution: f64) -> Result<Self, GridError> {
        let (lo, hi) = map
            .bounds()
            .unwrap_or((Point2::default(), Point2::new(resolution, resolution)));
        let w = (((hi.x - lo.x) / resolution).ceil() as usize).max(1);
        let h = (((hi.y - lo.y) / resolution).ceil() as usize).max(1);
        Self::new(lo, resolution, w, h)
    }

    pub fn origin(&self) -> Point2 {
        self.origin
    }

    pub fn resolution(&self) -> f64 {
        self.resolution
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn cells(&self) -> &[bool] {
        &self.cells
    }

    pub fn is_occupied(&self, col: usize, row: usize) -> bool {
        self.cells[row * self.width + col]
    }

    pub fn set_occupied(&mut self, col: usize, row: usize) {
        self.cells[row * self.width + col] = true;
    }

    pub fn occupied_count(&self) -> usize {
        self.cells.iter().filter(|&&c| c).count()
    }

    pub fn cell_center(&self, col: usize, row: usize) -> Point2 {
        Point2::new(
            self.origin.x + (col as f64 + 0.5) * self.resolution,
            self.origin.y + (row as f64 + 0.5) * self.resolution,
        )
    }

    /// 8-bit PGM in map_server convention: occupied 0, free 254, top row = max y.
    pub fn to_pgm(&self) -> Vec<u8> {
        let mut px = Vec::with_capacity(self.cells.len());
        for row in (0..self.height).rev() {
            for col in 0..self.width {
                px.push(if self.is_occupied(col, row) { 0 } else { 254 });
            }
        }
        crate::imageio::encode_pgm8(self.width, self.height, &px)
    }
}

/// Marks every cell whose center lies inside a furniture contour. Occupied
/// cells are never cleared.
pub fn inject_obstacles(map: &SemanticMap, grid: &OccupancyGrid) -> OccupancyGrid {
    let mut out = grid.clone();
    for f in map.furniture() {
        let (lo, hi) = f.contour.bounds();
        let res = grid.resolution;
        // Candidate window; cells outside the bounding box cannot be inside.
        let c0 = (((lo.x - grid.origin.x) / res).floor() - 1.0).max(0.0) as usize;
        let r0 = (((lo.y - grid.origin.y) / res).floor() - 1.0).max(0.0) as usize;
        let c1 = ((((hi.x - grid.origin.x) / res).ceil() + 1.0).max(0.0) as usize).min(grid.width);
        let r1 = ((((hi.y - grid.origin.y) / res).ceil() + 1.0).max(0.0) as usize).min(grid.height);
        for row in r0..r1 {
            for col in c0..c1 {
                if !out.is_occupied(col, row) && f.contour.contains(grid.cell_center(col, row)) {
                    out.set_occupied(col, row);
                }
            }
        }
    }
    out
}
