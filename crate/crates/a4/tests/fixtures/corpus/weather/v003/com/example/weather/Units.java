package com.example.weather;

final class Units {
    static float toKmh(float metresPerSecond) {
        return metresPerSecond * 3.6f;
    }
}
