package sim;

import android.util.FloatMath;

class Particle {
    float vx;
    float vy;

    float speed(float scale) {
        float dx = vx * scale;
        return (float) Math.sqrt(dx * dx + vy * vy);
    }
}
