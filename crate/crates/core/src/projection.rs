//! Cylindrical equal-area projection for longitude/latitude input.

use crate::geometry::Point;

#[derive(Debug, Clone, Copy, PartialEq, thiserror::Error)]
pub enum ProjectionError {
    #[error("longitude {0} outside [-180, 180]")]
    Longitude(f64),
    #[error("latitude {0} outside (-90, 90)")]
    Latitude(f64),
}

/// Lambert cylindrical equal-area with a configurable standard parallel.
///
/// `x = R * lon * cos(phi0)`, `y = R * sin(lat) / cos(phi0)`, angles in
/// radians. Output units follow `radius` (kilometres by default).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CylindricalEqualArea {
    cos_phi0: f64,
    radius: f64,
}

impl CylindricalEqualArea {
    /// Authalic Earth radius in kilometres.
    pub const AUTHALIC_RADIUS_KM: f64 = 6371.0072;

    pub fn new(standard_parallel_deg: f64) -> Result<Self, ProjectionError> {
        check_lat(standard_parallel_deg)?;
        Ok(CylindricalEqualArea {
            cos_phi0: libm::cos(standard_parallel_deg.to_radians()),
            radius: Self::AUTHALIC_RADIUS_KM,
        })
    }

    /// Standard parallel at the middle of the latitude extent.
    pub fn for_latitude_range(lat_min: f64, lat_max: f64) -> Result<Self, ProjectionError> {
        check_lat(lat_min)?;
        check_lat(lat_max)?;
        Self::new(0.5 * (lat_min + lat_max))
    }

    pub fn with_radius(mut self, radius: f64) -> Self {
        self.radius = radius;
        self
    }

    pub fn project(&self, lon: f64, lat: f64) -> Result<Point, ProjectionError> {
        if !(-180.0..=180.0).contains(&lon) {
            return Err(ProjectionError::Longitude(lon));
        }
        check_lat(lat)?;
        Ok(Point::new(
            self.radius * lon.to_radians() * self.cos_phi0,
            self.radius * libm::sin(lat.to_radians()) / self.cos_phi0,
        ))
    }
}

fn check_lat(lat: f64) -> Result<(), ProjectionError> {
    if lat > -90.0 && lat < 90.0 {
        Ok(())
    } else {
        Err(ProjectionError::Latitude(lat))
    }
}
