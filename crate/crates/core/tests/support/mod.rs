#![allow(dead_code)]

pub mod launcher;
pub mod random_scene;
