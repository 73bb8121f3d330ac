package badge;

import android.content.Context;
import android.content.res.Resources;

public class BadgeRenderer {
    public int tint(Context context) {
        Resources res = context.getResources();
        return res.getColor(R.color.badge);
    }
}
