/*!
The guide in `book/` rendered as rustdoc modules.

mdBook cannot run the code listings in the chapters as tests, so this crate
includes every chapter as module documentation and lets `cargo test --doc`
compile and execute each ```rust block against the real `deconv` API.  One
module per chapter keeps a failing doctest attributable to its chapter.

Render the human-readable version with `mdbook build book/`; this crate
exists purely to keep the book and the library from drifting apart.
*/

#[doc = include_str!("../../../README.md")]
pub mod readme {}

#[doc = include_str!("../../../book/src/introduction.md")]
pub mod introduction {}

#[doc = include_str!("../../../book/src/model.md")]
pub mod model {}

#[doc = include_str!("../../../book/src/densities.md")]
pub mod densities {}

#[doc = include_str!("../../../book/src/estimator.md")]
pub mod estimator {}

#[doc = include_str!("../../../book/src/penalties.md")]
pub mod penalties {}

#[doc = include_str!("../../../book/src/risk.md")]
pub mod risk {}

#[doc = include_str!("../../../book/src/experiments.md")]
pub mod experiments {}

#[doc = include_str!("../../../book/src/rates.md")]
pub mod rates {}

#[doc = include_str!("../../../book/src/cli.md")]
pub mod cli {}
