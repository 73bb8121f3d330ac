package alarm;

import android.content.Context;
import android.os.Vibrator;

public class Buzzer {
    private final Context context;

    public Buzzer(Context context) {
        this.context = context;
    }

    public void buzz() {
        Vibrator vibrator = (Vibrator) context.getSystemService(Context.VIBRATOR_SERVICE);
        vibrator.vibrate(400);
    }
}
