"""Чтение видео и подготовка клипов."""

from app.video.frames import Clip, Frame, GrayFrame
from app.video.images import load_frame_sequence, read_raw_rgb, save_frame_sequence, write_raw_rgb
from app.video.preprocess import (
    center_crop_window,
    crop,
    extract_clips,
    horizontal_flip,
    resize_bilinear,
    to_grayscale,
)
from app.video.y4m import parse_y4m, read_y4m_file

__all__ = [
    "Clip",
    "Frame",
    "GrayFrame",
    "center_crop_window",
    "crop",
    "extract_clips",
    "horizontal_flip",
    "load_frame_sequence",
    "parse_y4m",
    "read_raw_rgb",
    "read_y4m_file",
    "resize_bilinear",
    "save_frame_sequence",
    "to_grayscale",
    "write_raw_rgb",
]
