//! Floating-point scalar abstraction for probabilities and statistics.
//!
//! Exact work (ring arithmetic, counts) is integral; only the numeric
//! evaluation of products and statistics is generic over the float type.

use std::fmt::Debug;

use num_traits::{Float, FromPrimitive};

pub trait Real: Float + FromPrimitive + Debug + Send + Sync + 'static {
    /// Converts an `f64` constant into `Self`.
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("representable constant")
    }
}

impl Real for f32 {}
impl Real for f64 {}
