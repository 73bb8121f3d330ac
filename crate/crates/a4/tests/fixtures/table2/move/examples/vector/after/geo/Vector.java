package geo;

import android.util.FloatMath;

public class Vector {
    private float x;
    private float y;

    public float length() {
        float sq = x * x + y * y;
        return (float) Math.sqrt(sq);
    }
}
